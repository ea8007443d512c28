#pragma once

// Carrier spaces for finitely supported measures: the unit interval, the unit
// square (Euclidean metric, compared via squared distances so everything is
// exact), the discrete naturals, and the convergent sequence {1/(n+1)} ∪ {0}.

#include "jnseq/rational.hpp"
#include "jnseq/setdesc.hpp"

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace jnseq {

enum class SpaceKind { unit_interval, unit_square, discrete_nat, convergent_seq };

inline std::string space_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::unit_interval: return "unit_interval";
    case SpaceKind::unit_square: return "unit_square";
    case SpaceKind::discrete_nat: return "discrete_nat";
    case SpaceKind::convergent_seq: return "convergent_seq";
  }
  return "?";
}

inline SpaceKind space_from_name(const std::string& s) {
  if (s == "unit_interval") return SpaceKind::unit_interval;
  if (s == "unit_square") return SpaceKind::unit_square;
  if (s == "discrete_nat") return SpaceKind::discrete_nat;
  if (s == "convergent_seq") return SpaceKind::convergent_seq;
  throw validation_error("unknown space '" + s + "'");
}

inline std::size_t space_dim(SpaceKind k) {
  return k == SpaceKind::unit_square ? 2 : 1;
}

// A point tagged with the space it lives in. Coordinates are exact rationals;
// for discrete_nat the single coordinate is the natural number itself.
struct Point {
  SpaceKind space;
  std::vector<Rational> coords;

  static Point interval(Rational x) { return {SpaceKind::unit_interval, {std::move(x)}}; }
  static Point square(Rational x, Rational y) {
    return {SpaceKind::unit_square, {std::move(x), std::move(y)}};
  }
  static Point nat(std::uint64_t n) {
    return {SpaceKind::discrete_nat, {Rational(n)}};
  }
  static Point seq(Rational x) { return {SpaceKind::convergent_seq, {std::move(x)}}; }

  std::uint64_t nat_value() const {
    if (space != SpaceKind::discrete_nat || coords.size() != 1 || den(coords[0]) != 1 ||
        coords[0] < 0)
      throw validation_error("point is not a natural number");
    return static_cast<std::uint64_t>(num(coords[0]));
  }

  friend bool operator==(const Point& a, const Point& b) {
    return a.space == b.space && a.coords == b.coords;
  }
  friend bool operator<(const Point& a, const Point& b) {
    if (a.space != b.space) return a.space < b.space;
    std::size_t n = std::min(a.coords.size(), b.coords.size());
    for (std::size_t i = 0; i < n; ++i)
      if (int c = cmp_r(a.coords[i], b.coords[i])) return c < 0;
    return a.coords.size() < b.coords.size();
  }

  std::string str() const {
    if (space == SpaceKind::discrete_nat) return num(coords[0]).str();
    std::string s = "(";
    for (std::size_t i = 0; i < coords.size(); ++i)
      s += (i ? "," : "") + to_string(coords[i]);
    return s + ")";
  }
};

// Carrier membership for each space kind; loud rejection elsewhere.
inline bool in_carrier(const Point& p) {
  const auto& c = p.coords;
  switch (p.space) {
    case SpaceKind::unit_interval:
      return c.size() == 1 && c[0] >= 0 && c[0] <= 1;
    case SpaceKind::unit_square:
      return c.size() == 2 && c[0] >= 0 && c[0] <= 1 && c[1] >= 0 && c[1] <= 1;
    case SpaceKind::discrete_nat:
      return c.size() == 1 && c[0] >= 0 && den(c[0]) == 1;
    case SpaceKind::convergent_seq:
      // {0} ∪ {1/k : k >= 1}
      return c.size() == 1 && (c[0] == 0 || (num(c[0]) == 1 && den(c[0]) >= 1));
  }
  return false;
}

inline void require_carrier(const Point& p) {
  if (!in_carrier(p))
    throw validation_error("point " + p.str() + " is not in the carrier of " +
                           space_name(p.space));
}

// Squared distance — exact for every space kind. The discrete space uses the
// 0/1 metric.
inline Rational dist2(const Point& a, const Point& b) {
  if (a.space != b.space)
    throw validation_error("distance between points of different spaces");
  switch (a.space) {
    case SpaceKind::discrete_nat:
      return a.coords == b.coords ? Rational(0) : Rational(1);
    case SpaceKind::unit_square: {
      Rational dx = a.coords[0] - b.coords[0];
      Rational dy = a.coords[1] - b.coords[1];
      return dx * dx + dy * dy;
    }
    default: {
      Rational dx = a.coords[0] - b.coords[0];
      return dx * dx;
    }
  }
}

// Flat double view of a point list, two slots per point (1-d spaces pad with
// zero). Carrier coordinates live in [0,1], so each conversion is off by at
// most 2^-53 absolutely — the margin survivor_cut budgets for.
inline std::vector<double> flatten_points(const std::vector<Point>& pts) {
  std::vector<double> flat(2 * pts.size(), 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    flat[2 * i] = to_double(pts[i].coords[0]);
    if (pts[i].coords.size() == 2) flat[2 * i + 1] = to_double(pts[i].coords[1]);
  }
  return flat;
}

// Threshold below which a double-computed squared distance could still beat
// the best one exactly: each computed coordinate difference is within
// eta = 3.4e-16 of the truth, so only pairs inside (sqrt(best) + 4*eta)^2
// can contend. Exact arithmetic decides among those survivors.
inline double survivor_cut(double best_d2) {
  constexpr double eta = 3.4e-16;
  double r = std::sqrt(best_d2) + 4 * eta;
  return r * r * (1.0 + 1e-12) + 1e-300;
}

// Exact minimum of dist2(p, pts[i]) over the set. `flat` must come from
// flatten_points(pts); the double pass discards pairs that cannot attain the
// minimum and the survivors are compared exactly.
inline Rational min_dist2_exact(const Point& p, const std::vector<Point>& pts,
                                const std::vector<double>& flat) {
  if (pts.empty()) throw validation_error("minimum distance over an empty point set");
  if (p.space == SpaceKind::discrete_nat) {  // 0/1 metric: nothing to filter
    for (const auto& q : pts)
      if (p == q) return Rational(0);
    return Rational(1);
  }
  double px = to_double(p.coords[0]);
  double py = p.coords.size() == 2 ? to_double(p.coords[1]) : 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double dx = px - flat[2 * i], dy = py - flat[2 * i + 1];
    best = std::min(best, dx * dx + dy * dy);
  }
  double cut = survivor_cut(best);
  std::optional<Rational> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double dx = px - flat[2 * i], dy = py - flat[2 * i + 1];
    if (dx * dx + dy * dy > cut) continue;
    Rational d = dist2(p, pts[i]);
    if (!out || rless(d, *out)) out = d;
  }
  return *out;
}

// Exact distance where it exists (always on 1-d spaces and the discrete
// space; on the square only when the squared distance is a rational square).
inline std::optional<Rational> dist_exact(const Point& a, const Point& b) {
  return exact_sqrt(dist2(a, b));
}

inline double dist_approx(const Point& a, const Point& b) {
  auto e = dist_exact(a, b);
  if (e) return to_double(*e);
  return std::sqrt(to_double(dist2(a, b)));
}

// A region: a finite union of open metric balls, or a symbolic clopen subset
// of the discrete naturals. Ball membership is decided on squared distances.
struct Ball {
  Point center;
  Rational radius;  // > 0
};

struct Region {
  SpaceKind space;
  std::vector<Ball> balls;  // used when `clopen` is empty
  SetPtr clopen;            // used on discrete_nat

  static Region of_balls(SpaceKind k, std::vector<Ball> bs) {
    if (k == SpaceKind::discrete_nat)
      throw validation_error("discrete_nat regions must be set descriptors");
    for (const auto& b : bs) {
      if (b.center.space != k)
        throw validation_error("ball center space mismatch");
      require_carrier(b.center);
      if (b.radius <= 0) throw validation_error("ball radius must be positive");
    }
    return Region{k, std::move(bs), nullptr};
  }
  static Region of_clopen(SetPtr d) {
    return Region{SpaceKind::discrete_nat, {}, std::move(d)};
  }

  bool contains(const Point& p) const {
    if (p.space != space) throw validation_error("region/point space mismatch");
    if (clopen) return clopen->contains(p.nat_value());
    for (const auto& b : balls)
      if (dist2(p, b.center) < b.radius * b.radius) return true;
    return false;
  }
};

}  // namespace jnseq
