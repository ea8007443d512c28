#pragma once

// Verification suite. Everything here reports "not refuted at this horizon"
// semantics: exact rational checks wherever values are exact, documented
// double arithmetic where Euclidean distances force it.

#include "jnseq/analysis.hpp"
#include "jnseq/corpus.hpp"

#include <cmath>
#include <optional>
#include <thread>

namespace jnseq {

struct DecayRow {
  std::size_t n = 0;
  double max_abs = 0.0;                    // max over the corpus of |mu_n(f)|
  std::optional<Rational> max_abs_exact;   // set when the winning value is exact
  std::string argmax;
  Rational norm_defect;                    // | ||mu_n|| - 1 |, exact
  std::size_t support_size = 0;
};

struct RefutationWitness {
  std::size_t n = 0;
  std::string label;
  double value = 0.0;
  std::optional<Rational> exact;
};

struct DecayReport {
  std::vector<DecayRow> rows;
  Rational eps;
  std::size_t tail_start = 0;  // refutation only applies to rows n >= tail_start
  bool refuted = false;
  std::optional<RefutationWitness> witness;
  double sup_tail = 0.0;
  std::optional<double> fitted_exponent;  // least-squares slope of log max vs log(n+1)
};

namespace detail {

inline bool exceeds(const Value& v, const Rational& eps) {
  if (v.exact) return abs_r(*v.exact) > eps;
  return std::abs(v.approx) > to_double(eps);
}

inline bool value_less(const Value& a, const Value& b) {
  if (a.exact && b.exact) return abs_r(*a.exact) < abs_r(*b.exact);
  return std::abs(a.approx) < std::abs(b.approx);
}

}  // namespace detail

inline DecayReport weak_star_report(const MeasureSequence& seq,
                                    const std::vector<TestFunction>& fns, std::size_t horizon,
                                    const Rational& eps = pow2_inv(10), unsigned jobs = 1) {
  if (horizon == 0) throw validation_error("decay horizon must be >= 1");
  if (fns.empty()) throw validation_error("decay check needs a nonempty corpus");
  DecayReport rep;
  rep.eps = eps;
  rep.tail_start = horizon - std::max<std::size_t>(1, horizon / 4);
  rep.rows.resize(horizon);

  auto compute_row = [&](std::size_t n) {
    FinSuppMeasure m = seq.at(n);
    DecayRow row;
    row.n = n;
    row.support_size = m.support_size();
    row.norm_defect = abs_r(m.total_variation() - 1);
    Value best = Value::of(Rational(0));
    std::string best_label;
    bool first = true;
    for (const auto& f : fns) {
      Value v = integrate(m, f);
      if (first || detail::value_less(best, v)) {
        best = v;
        best_label = f.label();
        first = false;
      }
    }
    row.max_abs = std::abs(best.approx);
    if (best.exact) row.max_abs_exact = abs_r(*best.exact);
    row.argmax = best_label;
    rep.rows[n] = row;
  };

  if (jobs <= 1) {
    for (std::size_t n = 0; n < horizon; ++n) compute_row(n);
  } else {
    // deterministic fan-out: fixed row slots, contiguous chunks per worker
    std::vector<std::thread> pool;
    std::size_t chunk = (horizon + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
      std::size_t lo = j * chunk, hi = std::min(horizon, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([lo, hi, &compute_row] {
        for (std::size_t n = lo; n < hi; ++n) compute_row(n);
      });
    }
    for (auto& t : pool) t.join();
  }

  for (std::size_t n = rep.tail_start; n < horizon; ++n) {
    const DecayRow& row = rep.rows[n];
    rep.sup_tail = std::max(rep.sup_tail, row.max_abs);
    bool over = row.max_abs_exact ? (*row.max_abs_exact > eps)
                                  : (row.max_abs > to_double(eps));
    if (over && !rep.refuted) {
      rep.refuted = true;
      rep.witness = RefutationWitness{n, row.argmax, row.max_abs, row.max_abs_exact};
    }
  }

  // fitted decay exponent over the nonzero rows in the back half
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t n = horizon / 2; n < horizon; ++n) {
    double y = rep.rows[n].max_abs;
    if (y <= 0) continue;
    double lx = std::log(static_cast<double>(n + 1)), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt >= 2 && sxx * cnt - sx * sx != 0)
    rep.fitted_exponent = (sxy * cnt - sx * sy) / (sxx * cnt - sx * sx);
  return rep;
}

struct NormDefectNote {
  std::size_t n = 0;
  Rational total_variation;
};

struct HalfBalanceNote {
  std::size_t n = 0;
  Rational pos_mass;
  Rational neg_mass;
};

struct Certificate {
  bool norms_ok = true;
  std::optional<NormDefectNote> first_norm_defect;
  DecayReport decay;
  bool half_balance_ok = true;
  Rational half_tolerance;
  std::optional<HalfBalanceNote> first_half_violation;
  bool ok = false;
};

// Norm exactness, corpus decay, and tail half/half balance in one bundle.
inline Certificate jn_certificate(const MeasureSequence& seq,
                                  const std::vector<TestFunction>& fns, std::size_t horizon,
                                  const Rational& eps = pow2_inv(10),
                                  const Rational& half_tol = pow2_inv(8), unsigned jobs = 1) {
  Certificate cert;
  cert.half_tolerance = half_tol;
  for (std::size_t n = 0; n < horizon; ++n) {
    Rational tv = seq.at(n).total_variation();
    if (tv != 1) {
      cert.norms_ok = false;
      cert.first_norm_defect = NormDefectNote{n, tv};
      break;
    }
  }
  cert.decay = weak_star_report(seq, fns, horizon, eps, jobs);
  std::size_t tail_start = cert.decay.tail_start;
  for (std::size_t n = tail_start; n < horizon; ++n) {
    auto parts = seq.at(n).split();
    Rational pm = parts.positive.total_variation();
    Rational nm = parts.negative.total_variation();
    if (abs_r(pm - Rational(1, 2)) > half_tol || abs_r(nm - Rational(1, 2)) > half_tol) {
      cert.half_balance_ok = false;
      cert.first_half_violation = HalfBalanceNote{n, pm, nm};
      break;
    }
  }
  cert.ok = cert.norms_ok && !cert.decay.refuted && cert.half_balance_ok;
  return cert;
}

struct DisjointnessReport {
  bool ok = true;
  std::optional<Point> collision;
  std::size_t first_index = 0, second_index = 0;
};

inline DisjointnessReport disjointness_check(const MeasureSequence& seq, std::size_t horizon) {
  DisjointnessReport rep;
  std::map<Point, std::size_t> owner;
  for (std::size_t n = 0; n < horizon; ++n) {
    FinSuppMeasure m = seq.at(n);  // keep alive: atoms() refers into the measure
    for (const auto& [pt, c] : m.atoms()) {
      auto [it, fresh] = owner.emplace(pt, n);
      if (!fresh) {
        rep.ok = false;
        rep.collision = pt;
        rep.first_index = it->second;
        rep.second_index = n;
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace jnseq
