#pragma once

// Deterministic test-function corpus per space: the constant one, coordinate
// projections, monomials up to a declared degree, seeded Lipschitz-bounded
// piecewise-linear functions on rational grids, separating bumps at seeded
// centers, and clopen indicators on the discrete space. Identical config ->
// identical corpus, bit for bit, on every platform (raw mt19937_64 outputs
// reduced by modulus; no std distributions).

#include "jnseq/function.hpp"

#include <random>

namespace jnseq {

struct CorpusConfig {
  Rational lipschitz = Rational(8);  // budget L: every member's bound is <= L
  std::size_t count = 24;
  std::uint64_t seed = 2;
  unsigned degree = 2;
};

namespace detail {

// deterministic integer in [0, m) from the raw engine stream
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t m) { return rng() % m; }

inline TestFunction seeded_pwl(SpaceKind k, std::size_t axis, const Rational& L,
                               std::mt19937_64& rng, const std::string& label) {
  const std::int64_t segments = 8;
  const std::int64_t grid = 64;
  // |slope| = |dy_units| * segments / grid, so cap dy_units at floor(L*grid/segments)
  Rational cap = L * grid / segments;
  Int cap_floor = num(cap) / den(cap);
  std::int64_t smax = cap_floor > 1 ? static_cast<std::int64_t>(cap_floor) : 1;
  std::vector<Rational> xs, ys;
  Rational y(static_cast<long long>(draw(rng, grid + 1)), grid);
  for (std::int64_t i = 0; i <= segments; ++i) {
    xs.emplace_back(i, segments);
    ys.push_back(y);
    std::int64_t dy = static_cast<std::int64_t>(draw(rng, 2 * smax + 1)) - smax;
    y += Rational(dy, grid);
    if (y < 0) y = 0;
    if (y > 1) y = 1;
  }
  return pwl_fn(k, axis, std::move(xs), std::move(ys), label);
}

inline TestFunction seeded_bump(SpaceKind k, const Rational& L, std::mt19937_64& rng,
                                const std::string& label) {
  // clearance delta = radius (the zero set is the ball center), composed bound 2/radius
  Rational radius = std::max(Rational(2) / L, Rational(1, 2));
  std::vector<Rational> coords;
  for (std::size_t i = 0; i < space_dim(k); ++i)
    coords.emplace_back(static_cast<long long>(draw(rng, 17)), 16);
  Point center{k, coords};
  if (k == SpaceKind::convergent_seq) {
    // snap to the carrier: 0 or 1/j
    std::uint64_t j = draw(rng, 12);
    center = Point::seq(j == 0 ? Rational(0) : Rational(1, static_cast<long long>(j)));
  }
  Region u = Region::of_balls(k, {Ball{center, radius}});
  return urysohn_fn({center}, u, label);
}

inline TestFunction seeded_indicator(std::mt19937_64& rng, const std::string& label) {
  switch (draw(rng, 4)) {
    case 0: return indicator_fn(SetDescriptor::squares(), label);
    case 1: return indicator_fn(SetDescriptor::factorials(), label);
    case 2: {
      std::uint64_t b = 2 + draw(rng, 8);
      std::uint64_t a = draw(rng, b);
      return indicator_fn(SetDescriptor::ap(a, b), label);
    }
    default: {
      std::uint64_t b = 2 + draw(rng, 8);
      std::uint64_t a = draw(rng, b);
      return indicator_fn(SetDescriptor::complement(SetDescriptor::ap(a, b)), label);
    }
  }
}

}  // namespace detail

inline std::vector<TestFunction> corpus(SpaceKind k, const CorpusConfig& cfg = {}) {
  if (cfg.count == 0) throw validation_error("corpus count must be >= 1");
  if (cfg.lipschitz <= 0) throw validation_error("corpus Lipschitz budget must be positive");
  std::vector<TestFunction> fns;
  fns.push_back(one_fn(k));
  if (k != SpaceKind::discrete_nat) {
    for (std::size_t axis = 0; axis < space_dim(k); ++axis)
      fns.push_back(coordinate_fn(k, axis));
    if (k == SpaceKind::unit_square) {
      for (unsigned total = 2; total <= cfg.degree; ++total)
        for (unsigned a = 0; a <= total; ++a)
          fns.push_back(monomial_fn(k, {a, total - a}));
    } else {
      for (unsigned d = 2; d <= cfg.degree; ++d) fns.push_back(monomial_fn(k, {d}));
    }
  }
  std::mt19937_64 rng(cfg.seed);
  std::size_t i = 0;
  while (fns.size() < cfg.count) {
    std::string tag = std::to_string(i);
    if (k == SpaceKind::discrete_nat) {
      fns.push_back(detail::seeded_indicator(rng, "ind" + tag));
    } else if (i % 2 == 0) {
      fns.push_back(detail::seeded_pwl(k, i % (2 * space_dim(k)) / 2, cfg.lipschitz, rng,
                                       "pwl" + tag));
    } else {
      fns.push_back(detail::seeded_bump(k, cfg.lipschitz, rng, "bump" + tag));
    }
    ++i;
  }
  fns.resize(cfg.count);
  for (const auto& f : fns)
    if (f.lipschitz_bound() > cfg.lipschitz)
      throw jn_error("corpus member " + f.label() + " exceeds the Lipschitz budget");
  return fns;
}

}  // namespace jnseq
