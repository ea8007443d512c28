#pragma once

// Finite-horizon sequence analysis: per-point coefficient classification over
// a trailing window, greedy diagonal extraction of a pointwise-convergent
// subsequence, half-split profiles and the limit-mass bound.

#include "jnseq/sequence.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace jnseq {

struct AnalysisParams {
  std::size_t horizon = 400;
  std::size_t window = 50;
  Rational tau = pow2_inv(20);
  std::size_t min_keep = 8;  // smallest admissible extracted subsequence
};

enum class PointLabel { limit, liminf_only, limsup_only, transient };

inline std::string label_name(PointLabel l) {
  switch (l) {
    case PointLabel::limit: return "L";
    case PointLabel::liminf_only: return "LI-only";
    case PointLabel::limsup_only: return "LS-only";
    case PointLabel::transient: return "transient";
  }
  return "?";
}

struct PointReport {
  PointLabel label = PointLabel::transient;
  Rational estimate;    // window median of the signed coefficients
  Rational window_min;  // min |coef| over the window
  Rational window_max;  // max |coef| over the window
};

struct Classification {
  std::map<Point, PointReport> points;       // whole prefix support
  std::map<Point, Rational> limit_atoms;     // estimates of the L-classified points
  std::size_t horizon = 0, window = 0;
  Rational tau;
};

namespace detail {

inline Rational lower_median(std::vector<Rational> vals) {
  std::sort(vals.begin(), vals.end(), rless);
  return vals[(vals.size() - 1) / 2];
}

}  // namespace detail

inline Classification classify_points(const MeasureSequence& seq, const AnalysisParams& p) {
  if (p.horizon == 0) throw validation_error("classification horizon must be >= 1");
  std::size_t w = std::min(p.window == 0 ? 1 : p.window, p.horizon);
  Classification out;
  out.horizon = p.horizon;
  out.window = w;
  out.tau = p.tau;

  std::vector<FinSuppMeasure> window_measures;
  window_measures.reserve(w);
  std::set<Point> window_support;
  for (std::size_t n = p.horizon - w; n < p.horizon; ++n) {
    window_measures.push_back(seq.at(n));
    for (const auto& [pt, c] : window_measures.back().atoms()) window_support.insert(pt);
  }
  // points that never appear in the window are transient by definition
  for (const auto& pt : prefix_support(seq, p.horizon))
    out.points.emplace(pt, PointReport{});

  for (const auto& pt : window_support) {
    std::vector<Rational> vals;
    vals.reserve(w);
    for (const auto& m : window_measures) vals.push_back(m.at(pt));
    PointReport rep;
    rep.estimate = detail::lower_median(vals);
    rep.window_min = rep.window_max = abs_r(vals.front());
    bool stable = true;
    for (const auto& v : vals) {
      Rational a = abs_r(v);
      if (rless(a, rep.window_min)) rep.window_min = a;
      if (rless(rep.window_max, a)) rep.window_max = a;
      if (rless(p.tau, abs_r(v - rep.estimate))) stable = false;
    }
    if (stable && rless(p.tau, abs_r(rep.estimate)))
      rep.label = PointLabel::limit;
    else if (rep.window_min > p.tau)
      rep.label = PointLabel::liminf_only;
    else if (rep.window_max > p.tau)
      rep.label = PointLabel::limsup_only;
    else
      rep.label = PointLabel::transient;
    if (rep.label == PointLabel::limit) out.limit_atoms[pt] = rep.estimate;
    out.points[pt] = rep;
  }
  return out;
}

struct ExtractResult {
  std::vector<std::size_t> indices;  // chosen subsequence of 0..horizon-1
  FinSuppMeasure limit;              // assembled from final-window medians, purged below tau
};

// Greedy diagonal selection: walk the prefix support in first-appearance
// order; a point whose trailing window oscillates around its median at more
// than a quarter of the positions forces a thinning step that groups the
// current indices by the exact coefficient at that point and keeps the
// largest group (ties resolved toward the group holding the smallest index).
// Isolated spikes — atoms alive at a single index, unavoidable in the last
// window at every finite horizon — survive without thinning.
inline ExtractResult extract_pointwise_convergent(const MeasureSequence& seq,
                                                  const AnalysisParams& p) {
  if (p.horizon < p.min_keep)
    throw horizon_error("horizon " + std::to_string(p.horizon) + " below the minimum " +
                        std::to_string(p.min_keep));
  std::vector<FinSuppMeasure> ms = seq.prefix(p.horizon);

  std::vector<Point> order;
  {
    std::set<Point> seen;
    for (const auto& m : ms)
      for (const auto& [pt, c] : m.atoms())
        if (seen.insert(pt).second) order.push_back(pt);
  }

  std::vector<std::size_t> idx(p.horizon);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;

  const std::size_t max_sweeps = 8;
  bool changed = true;
  for (std::size_t sweep = 0; sweep < max_sweeps && changed; ++sweep) {
    changed = false;
    for (const auto& pt : order) {
      std::size_t w = std::min(p.window == 0 ? 1 : p.window, idx.size());
      std::vector<Rational> window;
      window.reserve(w);
      for (std::size_t i = idx.size() - w; i < idx.size(); ++i)
        window.push_back(ms[idx[i]].at(pt));
      Rational med = detail::lower_median(window);
      std::size_t exceed = 0;
      for (const auto& v : window)
        if (abs_r(v - med) > p.tau) ++exceed;
      if (4 * exceed <= w) continue;

      // persistent oscillation: regroup every current index by exact value
      std::map<Rational, std::vector<std::size_t>> groups;
      for (std::size_t i : idx) groups[ms[i].at(pt)].push_back(i);
      const std::vector<std::size_t>* best = nullptr;
      for (const auto& [v, g] : groups)
        if (!best || g.size() > best->size() ||
            (g.size() == best->size() && g.front() < best->front()))
          best = &g;
      if (best->size() < p.min_keep)
        throw horizon_error("pointwise extraction exhausted the horizon at point " + pt.str());
      idx = *best;
      changed = true;
    }
  }
  if (changed)
    throw horizon_error("pointwise extraction did not stabilize; raise the horizon");

  std::vector<std::pair<Point, Rational>> atoms;
  std::size_t w = std::min(p.window == 0 ? 1 : p.window, idx.size());
  for (const auto& pt : order) {
    std::vector<Rational> window;
    for (std::size_t i = idx.size() - w; i < idx.size(); ++i)
      window.push_back(ms[idx[i]].at(pt));
    Rational med = detail::lower_median(window);
    if (abs_r(med) > p.tau) atoms.emplace_back(pt, med);
  }
  ExtractResult res{std::move(idx), FinSuppMeasure::make(seq.space(), atoms)};

  // sanity: the assembled limit respects the norm-one envelope up to tau slack
  Rational bound = Rational(1) + p.tau * Rational(static_cast<long long>(order.size()));
  if (res.limit.total_variation() > bound)
    throw jn_error("extracted limit has total variation beyond the norm envelope");
  return res;
}

struct HalfSplitRow {
  std::size_t n = 0;
  Rational pos_mass;
  Rational neg_mass;   // total variation of the negative part
  Rational total_mass;  // mu(1)
  std::size_t support_size = 0;
};

inline std::vector<HalfSplitRow> half_split_profile(const MeasureSequence& seq,
                                                    std::size_t horizon) {
  std::vector<HalfSplitRow> rows;
  rows.reserve(horizon);
  for (std::size_t n = 0; n < horizon; ++n) {
    FinSuppMeasure m = seq.at(n);
    auto parts = m.split();
    rows.push_back(HalfSplitRow{n, parts.positive.total_variation(),
                                parts.negative.total_variation(), m.total_mass(),
                                m.support_size()});
  }
  return rows;
}

struct LimitMassReport {
  Rational mass_sum;           // sum of |estimate| over L-classified points
  std::size_t limit_count = 0;
  Rational bound;              // 1/2 + tau * limit_count
  bool violated = false;
};

inline LimitMassReport limit_mass_bound(const Classification& cls, const AnalysisParams& p) {
  LimitMassReport rep;
  rep.mass_sum = 0;
  rep.limit_count = cls.limit_atoms.size();
  for (const auto& [pt, est] : cls.limit_atoms) rep.mass_sum += abs_r(est);
  rep.bound = Rational(1, 2) + p.tau * Rational(static_cast<long long>(rep.limit_count));
  rep.violated = rep.mass_sum > rep.bound;
  return rep;
}

inline LimitMassReport limit_mass_bound(const MeasureSequence& seq, const AnalysisParams& p) {
  return limit_mass_bound(classify_points(seq, p), p);
}

struct RenormalizeResult {
  MeasureSequence sequence;                       // indices with both signs present
  std::vector<std::size_t> kept_indices;          // into the original sequence
  std::vector<Rational> distances;                // ||nu_k - mu_{kept_k}||, exact
  std::vector<std::size_t> skipped_one_signed;    // original indices left out
};

// Push each measure to the half/half sphere: nu = pos/(2||pos||) + neg/(2||neg||).
inline RenormalizeResult renormalize_half(const MeasureSequence& seq, std::size_t horizon) {
  std::vector<FinSuppMeasure> out;
  RenormalizeResult res{MeasureSequence{}, {}, {}, {}};
  for (std::size_t n = 0; n < horizon; ++n) {
    FinSuppMeasure m = seq.at(n);
    auto parts = m.split();
    Rational pn = parts.positive.total_variation();
    Rational nn = parts.negative.total_variation();
    if (pn == 0 || nn == 0) {
      res.skipped_one_signed.push_back(n);
      continue;
    }
    FinSuppMeasure nu =
        parts.positive.scaled(Rational(1) / (2 * pn)) + parts.negative.scaled(Rational(1) / (2 * nn));
    res.distances.push_back(tv_distance(nu, m));
    res.kept_indices.push_back(n);
    out.push_back(std::move(nu));
  }
  SequenceMeta meta = seq.meta();
  meta.name += "/half";
  meta.provenance.push_back("renormalized to the half/half sphere (" +
                            std::to_string(res.skipped_one_signed.size()) +
                            " one-signed indices skipped)");
  res.sequence = from_measures(seq.space(), std::move(out), std::move(meta));
  return res;
}

}  // namespace jnseq
