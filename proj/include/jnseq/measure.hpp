#pragma once

// Finitely supported signed measures with exact rational coefficients.
// A measure is a finite map point -> nonzero coefficient over a single space;
// all norms, restrictions and linear combinations are exact.

#include "jnseq/space.hpp"

#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace jnseq {

struct SignedParts;

class FinSuppMeasure {
 public:
  using AtomMap = std::map<Point, Rational>;

  FinSuppMeasure() : space_(SpaceKind::unit_interval) {}
  explicit FinSuppMeasure(SpaceKind k) : space_(k) {}

  // Merges duplicate points, drops exact zeros, validates the carrier.
  static FinSuppMeasure make(SpaceKind k, const std::vector<std::pair<Point, Rational>>& atoms) {
    FinSuppMeasure m(k);
    for (const auto& [p, c] : atoms) {
      if (p.space != k)
        throw validation_error("atom at " + p.str() + " does not live in " + space_name(k));
      require_carrier(p);
      m.atoms_[p] += c;
    }
    m.purge_zeros();
    return m;
  }

  SpaceKind space() const { return space_; }
  const AtomMap& atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  std::vector<Point> support() const {
    std::vector<Point> pts;
    pts.reserve(atoms_.size());
    for (const auto& [p, c] : atoms_) pts.push_back(p);
    return pts;
  }

  // Coefficient at a point (zero off the support).
  Rational at(const Point& p) const {
    auto it = atoms_.find(p);
    return it == atoms_.end() ? Rational(0) : it->second;
  }

  Rational total_variation() const {
    Rational s(0);
    for (const auto& [p, c] : atoms_) s += abs_r(c);
    return s;
  }

  // mu(1_X): the signed total mass.
  Rational total_mass() const {
    Rational s(0);
    for (const auto& [p, c] : atoms_) s += c;
    return s;
  }

  template <typename Pred>
  FinSuppMeasure restrict_if(Pred keep) const {
    FinSuppMeasure m(space_);
    for (const auto& [p, c] : atoms_)
      if (keep(p)) m.atoms_.emplace(p, c);
    return m;
  }

  FinSuppMeasure restrict(const Region& r) const {
    return restrict_if([&](const Point& p) { return r.contains(p); });
  }

  FinSuppMeasure restrict(const std::set<Point>& pts) const {
    return restrict_if([&](const Point& p) { return pts.count(p) > 0; });
  }

  // Variation mass |mu|(R) of a region — exact.
  Rational variation_mass(const Region& r) const {
    Rational s(0);
    for (const auto& [p, c] : atoms_)
      if (r.contains(p)) s += abs_r(c);
    return s;
  }

  SignedParts split() const;

  FinSuppMeasure scaled(const Rational& a) const {
    FinSuppMeasure m(space_);
    if (a == 0) return m;
    for (const auto& [p, c] : atoms_) m.atoms_.emplace(p, a * c);
    return m;
  }

  FinSuppMeasure normalized() const {
    Rational tv = total_variation();
    if (tv == 0) throw validation_error("cannot normalize the zero measure");
    return scaled(Rational(1) / tv);
  }

  friend FinSuppMeasure operator+(const FinSuppMeasure& a, const FinSuppMeasure& b) {
    if (a.space_ != b.space_)
      throw validation_error("cannot combine measures on different spaces");
    FinSuppMeasure m = a;
    for (const auto& [p, c] : b.atoms_) m.atoms_[p] += c;
    m.purge_zeros();
    return m;
  }
  friend FinSuppMeasure operator-(const FinSuppMeasure& a, const FinSuppMeasure& b) {
    return a + b.scaled(Rational(-1));
  }

  friend bool operator==(const FinSuppMeasure& a, const FinSuppMeasure& b) {
    return a.space_ == b.space_ && a.atoms_ == b.atoms_;
  }

  std::string str() const {
    std::string s = "{";
    bool first = true;
    for (const auto& [p, c] : atoms_) {
      if (!first) s += ", ";
      first = false;
      s += p.str() + ": " + to_string(c);
    }
    return s + "}";
  }

 private:
  SpaceKind space_;
  AtomMap atoms_;

  void purge_zeros() {
    for (auto it = atoms_.begin(); it != atoms_.end();)
      it = it->second == 0 ? atoms_.erase(it) : std::next(it);
  }
};

struct SignedParts {
  FinSuppMeasure positive;  // all coefficients > 0
  FinSuppMeasure negative;  // all coefficients < 0
};

inline SignedParts FinSuppMeasure::split() const {
  SignedParts parts{FinSuppMeasure(space_), FinSuppMeasure(space_)};
  for (const auto& [p, c] : atoms_)
    (c > 0 ? parts.positive : parts.negative).atoms_.emplace(p, c);
  return parts;
}

// Exact total-variation distance ||a - b||.
inline Rational tv_distance(const FinSuppMeasure& a, const FinSuppMeasure& b) {
  return (a - b).total_variation();
}

inline FinSuppMeasure linear_combine(
    const std::vector<std::pair<Rational, FinSuppMeasure>>& terms) {
  if (terms.empty()) throw validation_error("linear_combine needs at least one term");
  FinSuppMeasure acc(terms.front().second.space());
  for (const auto& [a, m] : terms) acc = acc + m.scaled(a);
  return acc;
}

inline bool supports_disjoint(const FinSuppMeasure& a, const FinSuppMeasure& b) {
  // both atom maps are ordered: linear merge
  auto ia = a.atoms().begin();
  auto ib = b.atoms().begin();
  while (ia != a.atoms().end() && ib != b.atoms().end()) {
    if (ia->first < ib->first)
      ++ia;
    else if (ib->first < ia->first)
      ++ib;
    else
      return false;
  }
  return true;
}

}  // namespace jnseq
