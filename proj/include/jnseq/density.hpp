#pragma once

// Density-zero algebra support: exact dyadic density profiles of descriptor
// sets, integration of clopen indicator sets against measures on the discrete
// space, and the obstruction-witness search for families of two-point
// measures (a density-handled set separating the pair anchors).

#include "jnseq/measure.hpp"
#include "jnseq/setdesc.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace jnseq {

enum class DensityVerdict { zero_trending, one_trending, oscillating, undecided };

inline const char* verdict_name(DensityVerdict v) {
  switch (v) {
    case DensityVerdict::zero_trending: return "zero_trending";
    case DensityVerdict::one_trending: return "one_trending";
    case DensityVerdict::oscillating: return "oscillating";
    default: return "undecided";
  }
}

struct DensityRow {
  std::uint64_t checkpoint = 0;  // N = 2^j
  std::uint64_t count = 0;       // |A ∩ [0, N)|
  Rational density;              // exact count / N
};

struct DensityProfile {
  std::vector<DensityRow> rows;
  DensityVerdict verdict = DensityVerdict::undecided;
  Rational delta;  // verdict margin
};

// Exact counts at dyadic checkpoints N = 2^3 .. 2^max_exp. The verdict reads
// the last half of the rows: all densities within delta of 0 (resp. 1) give a
// trending verdict, a swing of at least 1/4 reads as oscillating.
inline DensityProfile density_profile(const SetPtr& set, unsigned max_exp = 20,
                                      const Rational& delta = Rational(1, 64)) {
  if (!set) throw validation_error("null set descriptor");
  if (max_exp < 4 || max_exp > 40) throw validation_error("checkpoint exponent out of range");
  if (delta <= 0 || delta >= Rational(1, 2))
    throw validation_error("verdict margin must lie in (0, 1/2)");
  DensityProfile prof;
  prof.delta = delta;
  for (unsigned j = 3; j <= max_exp; ++j) {
    std::uint64_t n = std::uint64_t(1) << j;
    std::uint64_t c = set->count_below(n);
    prof.rows.push_back(
        {n, c, Rational(Int(c)) / Rational(Int(n))});
  }
  std::size_t tail_start = prof.rows.size() / 2;
  Rational lo = prof.rows[tail_start].density, hi = lo;
  for (std::size_t i = tail_start; i < prof.rows.size(); ++i) {
    lo = std::min(lo, prof.rows[i].density);
    hi = std::max(hi, prof.rows[i].density);
  }
  if (hi <= delta)
    prof.verdict = DensityVerdict::zero_trending;
  else if (lo >= 1 - delta)
    prof.verdict = DensityVerdict::one_trending;
  else if (hi - lo >= Rational(1, 4))
    prof.verdict = DensityVerdict::oscillating;
  return prof;
}

// Exact integral of the 0/1 indicator of a descriptor set against a finitely
// supported measure on the discrete space.
inline Rational clopen_integrate(const FinSuppMeasure& mu, const SetPtr& set) {
  if (mu.space() != SpaceKind::discrete_nat)
    throw validation_error("clopen descriptor integration lives on the discrete space");
  Rational total(0);
  for (const auto& [pt, c] : mu.atoms())
    if (set->contains(pt.nat_value())) total += c;
  return total;
}

struct ObstructionWitness {
  SetPtr set;
  std::string source;                   // catalog entry or image thinning used
  bool orientation_positive = true;     // set holds the x anchors (else the y anchors)
  std::vector<std::size_t> separated;   // pair indices with |nu_j(set)| = 1/2
  std::size_t scanned = 0;
  Rational density_at_checkpoint;       // exact |set ∩ [0, N)| / N
  std::uint64_t checkpoint = 0;
  DensityProfile profile;
};

namespace detail {

// All listed pair indices must have their anchor inside the set and the
// opposite anchor outside it.
inline bool separates(const SetPtr& set, const std::vector<std::uint64_t>& ins,
                      const std::vector<std::uint64_t>& outs,
                      const std::vector<std::size_t>& idx) {
  for (std::size_t j : idx)
    if (!set->contains(ins[j]) || set->contains(outs[j])) return false;
  return true;
}

inline std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

}  // namespace detail

// Search for a density-handled set separating the anchors of a two-point
// family: canonical catalog sets first (recognized exactly when they separate
// every pair), then the finite image of the positive anchors with
// progressively sparser index thinnings. Throws when nothing separates.
inline ObstructionWitness obstruction_witness(const std::vector<std::uint64_t>& xs,
                                              const std::vector<std::uint64_t>& ys,
                                              std::uint64_t checkpoint = 1000000,
                                              std::size_t min_kept = 4) {
  if (xs.size() != ys.size()) throw validation_error("anchor lists differ in length");
  if (xs.empty()) throw validation_error("no pairs to witness");
  if (checkpoint < 8) throw validation_error("density checkpoint too small");
  for (std::size_t j = 0; j < xs.size(); ++j)
    if (xs[j] == ys[j])
      throw validation_error("pair " + std::to_string(j) + " has equal anchors");

  auto finish = [&](SetPtr set, std::string source, bool positive,
                    std::vector<std::size_t> idx) {
    ObstructionWitness w;
    w.set = std::move(set);
    w.source = std::move(source);
    w.orientation_positive = positive;
    w.separated = std::move(idx);
    w.scanned = xs.size();
    w.checkpoint = checkpoint;
    w.density_at_checkpoint =
        Rational(Int(w.set->count_below(checkpoint))) / Rational(Int(checkpoint));
    w.profile = density_profile(w.set);
    return w;
  };

  const std::vector<std::size_t> all = detail::all_indices(xs.size());
  const std::vector<std::pair<std::string, SetPtr>> catalog = {
      {"canonical:squares", SetDescriptor::squares()},
      {"canonical:factorials", SetDescriptor::factorials()},
  };
  for (const auto& [name, set] : catalog) {
    if (detail::separates(set, xs, ys, all)) return finish(set, name, true, all);
    if (detail::separates(set, ys, xs, all)) return finish(set, name, false, all);
  }

  struct Thinning {
    std::string name;
    std::vector<std::size_t> idx;
  };
  std::vector<Thinning> thinnings;
  thinnings.push_back({"image:full", all});
  {
    Thinning t{"image:even-index", {}};
    for (std::size_t j = 0; j < xs.size(); j += 2) t.idx.push_back(j);
    thinnings.push_back(std::move(t));
  }
  {
    Thinning t{"image:square-index", {}};
    for (std::size_t r = 0; r * r < xs.size(); ++r) t.idx.push_back(r * r);
    thinnings.push_back(std::move(t));
  }
  {
    Thinning t{"image:factorial-index", {}};
    std::size_t fac = 1;
    for (std::size_t r = 2; fac < xs.size(); ++r) {
      t.idx.push_back(fac);  // 1, 2, 6, 24, ... strictly increasing
      if (fac > xs.size() / r) break;
      fac *= r;
    }
    thinnings.push_back(std::move(t));
  }

  for (const auto& t : thinnings) {
    if (t.idx.size() < min_kept) continue;
    std::vector<std::uint64_t> members;
    for (std::size_t j : t.idx) members.push_back(xs[j]);
    SetPtr img = SetDescriptor::image("pair-anchors", members);
    if (detail::separates(img, xs, ys, t.idx)) return finish(img, t.name, true, t.idx);
  }
  throw horizon_error(
      "no catalog set or anchor-image thinning separates the scanned pairs");
}

}  // namespace jnseq
