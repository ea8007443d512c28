#pragma once

// Continuous test functions as symbolic expression trees. Two evaluation
// modes: eval() returns an exact rational whenever the tree supports it
// (everything except interior values of Euclidean-distance bumps on the
// square) plus a double approximation; cmp() decides value <=> threshold
// EXACTLY for every node kind by pushing comparisons through monotone pieces
// down to squared-distance tests. All certificate logic uses cmp().

#include "jnseq/measure.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace jnseq {

struct Value {
  std::optional<Rational> exact;
  double approx = 0.0;

  static Value of(Rational q) { return Value{q, to_double(q)}; }
  static Value approx_only(double d) { return Value{std::nullopt, d}; }
};

struct FnNode;
using FnPtr = std::shared_ptr<const FnNode>;

struct Monomial {
  Rational coef;
  std::vector<unsigned> exps;  // one exponent per axis
};

struct FnNode {
  enum class Kind { constant, poly, pwl, indicator, urysohn, min, reparam };

  Kind kind;

  Rational c;                     // constant
  std::vector<Monomial> terms;    // poly
  std::size_t axis = 0;           // pwl
  std::vector<Rational> xs, ys;   // pwl breakpoints/values, xs sorted, spans [0,1]
  SetPtr set;                     // indicator (discrete_nat)
  std::vector<Point> e_points;    // urysohn: the zero set E
  std::vector<double> e_flat;     // flatten_points(e_points), set by the builder
  Rational delta;                 // urysohn: margin
  Region u_region;                // urysohn: the enclosing open set (for export)
  FnPtr f, g;                     // min (f,g) / reparam (f)
  Rational a, b;                  // reparam thresholds, 0 <= a < b <= 1

  // ---- exact comparison: sign of (value(p) - t) ----
  int cmp(const Point& p, const Rational& t) const {
    switch (kind) {
      case Kind::constant:
        return sign(c - t);
      case Kind::poly:
      case Kind::pwl:
      case Kind::indicator:
        return sign(*eval(p).exact - t);
      case Kind::urysohn: {
        if (e_points.empty()) return sign(Rational(1) - t);
        if (t < 0) return 1;
        if (t > 1) return -1;
        Rational d2 = min_dist2(p);
        if (t == 1) return d2 >= delta * delta ? 0 : -1;
        // value vs t  <=>  min(1, d/delta) vs s,  s = (1+t)/2 in [1/2, 1)
        Rational s = (1 + t) / 2;
        Rational rhs = s * s * delta * delta;
        int c2 = sign(d2 - rhs);
        if (c2 < 0) return t == 0 ? 0 : -1;  // value below plateau edge: exactly 0
        return c2;
      }
      case Kind::min:
        return std::min(f->cmp(p, t), g->cmp(p, t));
      case Kind::reparam: {
        if (t < 0) return 1;
        if (t > 1) return -1;
        if (t == 0) return f->cmp(p, a) <= 0 ? 0 : 1;
        if (t == 1) return f->cmp(p, b) >= 0 ? 0 : -1;
        return f->cmp(p, a + t * (b - a));
      }
    }
    throw jn_error("unreachable function node kind");
  }

  Value eval(const Point& p) const {
    switch (kind) {
      case Kind::constant:
        return Value::of(c);
      case Kind::poly: {
        Rational acc(0);
        for (const auto& m : terms) {
          Rational t = m.coef;
          for (std::size_t i = 0; i < m.exps.size(); ++i)
            for (unsigned k = 0; k < m.exps[i]; ++k) t *= p.coords[i];
          acc += t;
        }
        return Value::of(acc);
      }
      case Kind::pwl: {
        const Rational& x = p.coords[axis];
        if (x <= xs.front()) return Value::of(ys.front());
        if (x >= xs.back()) return Value::of(ys.back());
        std::size_t hi = 1;
        while (xs[hi] < x) ++hi;
        const Rational &x0 = xs[hi - 1], &x1 = xs[hi];
        const Rational &y0 = ys[hi - 1], &y1 = ys[hi];
        return Value::of(y0 + (x - x0) / (x1 - x0) * (y1 - y0));
      }
      case Kind::indicator:
        return Value::of(set->contains(p.nat_value()) ? 1 : 0);
      case Kind::urysohn: {
        if (e_points.empty()) return Value::of(Rational(1));
        Rational d2 = min_dist2(p);
        if (4 * d2 <= delta * delta) return Value::of(Rational(0));
        if (d2 >= delta * delta) return Value::of(Rational(1));
        if (auto d = exact_sqrt(d2)) return Value::of(2 * *d / delta - 1);
        return Value::approx_only(2 * std::sqrt(to_double(d2)) / to_double(delta) - 1);
      }
      case Kind::min: {
        Value vf = f->eval(p), vg = g->eval(p);
        if (vf.exact && vg.exact)
          return Value::of(std::min(*vf.exact, *vg.exact));
        // one side exact: cmp can still decide which branch wins, exactly
        if (vf.exact && g->cmp(p, *vf.exact) >= 0) return vf;
        if (vg.exact && f->cmp(p, *vg.exact) >= 0) return vg;
        return Value::approx_only(std::min(vf.approx, vg.approx));
      }
      case Kind::reparam: {
        if (f->cmp(p, a) <= 0) return Value::of(Rational(0));
        if (f->cmp(p, b) >= 0) return Value::of(Rational(1));
        Value v = f->eval(p);
        if (v.exact) return Value::of((*v.exact - a) / (b - a));
        return Value::approx_only((v.approx - to_double(a)) / to_double(b - a));
      }
    }
    throw jn_error("unreachable function node kind");
  }

  // Rational Lipschitz upper bound w.r.t. the space metric.
  Rational lipschitz() const {
    switch (kind) {
      case Kind::constant:
        return Rational(0);
      case Kind::poly: {
        Rational s(0);
        for (const auto& m : terms) {
          unsigned deg = 0;
          for (unsigned e : m.exps) deg += e;
          s += abs_r(m.coef) * deg;
        }
        return s;
      }
      case Kind::pwl: {
        Rational worst(0);
        for (std::size_t i = 1; i < xs.size(); ++i)
          worst = std::max(worst, abs_r((ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1])));
        return worst;
      }
      case Kind::indicator:
        return Rational(1);  // discrete metric: |f(x)-f(y)| <= 1 = d(x,y)
      case Kind::urysohn:
        return e_points.empty() ? Rational(0) : Rational(2) / delta;
      case Kind::min:
        return std::max(f->lipschitz(), g->lipschitz());
      case Kind::reparam:
        return f->lipschitz() / (b - a);
    }
    throw jn_error("unreachable function node kind");
  }

  Rational min_dist2(const Point& p) const {
    if (e_flat.size() == 2 * e_points.size())
      return min_dist2_exact(p, e_points, e_flat);
    Rational best = dist2(p, e_points.front());  // hand-built node without the cache
    for (std::size_t i = 1; i < e_points.size(); ++i) {
      Rational d = dist2(p, e_points[i]);
      if (rless(d, best)) best = d;
    }
    return best;
  }

  static int sign(const Rational& q) { return q < 0 ? -1 : (q > 0 ? 1 : 0); }
};

// A labeled tree bound to one space, with its Lipschitz bound cached.
class TestFunction {
 public:
  TestFunction() = default;
  TestFunction(SpaceKind space, FnPtr root, std::string label)
      : space_(space), root_(std::move(root)), label_(std::move(label)) {
    lipschitz_ = root_->lipschitz();
  }

  SpaceKind space() const { return space_; }
  const FnPtr& root() const { return root_; }
  const std::string& label() const { return label_; }
  const Rational& lipschitz_bound() const { return lipschitz_; }

  Value eval(const Point& p) const {
    check(p);
    return root_->eval(p);
  }
  // sign of f(p) - t, decided exactly
  int cmp(const Point& p, const Rational& t) const {
    check(p);
    return root_->cmp(p, t);
  }

 private:
  SpaceKind space_ = SpaceKind::unit_interval;
  FnPtr root_;
  std::string label_;
  Rational lipschitz_;

  void check(const Point& p) const {
    if (p.space != space_)
      throw validation_error("evaluating " + label_ + " at a point of the wrong space");
  }
};

// ---- builders ----

inline FnPtr make_node(FnNode n) { return std::make_shared<FnNode>(std::move(n)); }

inline TestFunction constant_fn(SpaceKind k, Rational c, std::string label = "") {
  FnNode n;
  n.kind = FnNode::Kind::constant;
  n.c = std::move(c);
  return TestFunction(k, make_node(std::move(n)), label.empty() ? "const" : label);
}

inline TestFunction one_fn(SpaceKind k) { return constant_fn(k, Rational(1), "one"); }

inline TestFunction coordinate_fn(SpaceKind k, std::size_t axis) {
  if (k == SpaceKind::discrete_nat)
    throw validation_error("coordinate functions are unbounded on the discrete space");
  if (axis >= space_dim(k)) throw validation_error("coordinate axis out of range");
  FnNode n;
  n.kind = FnNode::Kind::poly;
  Monomial m;
  m.coef = 1;
  m.exps.assign(space_dim(k), 0);
  m.exps[axis] = 1;
  n.terms = {std::move(m)};
  return TestFunction(k, make_node(std::move(n)), axis == 0 ? "proj_x" : "proj_y");
}

inline TestFunction monomial_fn(SpaceKind k, std::vector<unsigned> exps) {
  if (k == SpaceKind::discrete_nat)
    throw validation_error("monomials are unbounded on the discrete space");
  if (exps.size() != space_dim(k)) throw validation_error("monomial arity mismatch");
  FnNode n;
  n.kind = FnNode::Kind::poly;
  Monomial m;
  m.coef = 1;
  m.exps = exps;
  n.terms = {std::move(m)};
  std::string label = "mono";
  for (unsigned e : exps) label += "_" + std::to_string(e);
  return TestFunction(k, make_node(std::move(n)), label);
}

inline TestFunction pwl_fn(SpaceKind k, std::size_t axis, std::vector<Rational> xs,
                           std::vector<Rational> ys, std::string label = "pwl") {
  if (k == SpaceKind::discrete_nat)
    throw validation_error("piecewise-linear functions need a metric coordinate");
  if (axis >= space_dim(k)) throw validation_error("pwl axis out of range");
  if (xs.size() < 2 || xs.size() != ys.size())
    throw validation_error("pwl needs matching breakpoint/value lists of size >= 2");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] <= xs[i - 1]) throw validation_error("pwl breakpoints must increase strictly");
  if (xs.front() != 0 || xs.back() != 1)
    throw validation_error("pwl grid must span [0,1]");
  FnNode n;
  n.kind = FnNode::Kind::pwl;
  n.axis = axis;
  n.xs = std::move(xs);
  n.ys = std::move(ys);
  return TestFunction(k, make_node(std::move(n)), std::move(label));
}

inline TestFunction indicator_fn(SetPtr set, std::string label = "") {
  FnNode n;
  n.kind = FnNode::Kind::indicator;
  std::string text = set->str();
  n.set = std::move(set);
  return TestFunction(SpaceKind::discrete_nat, make_node(std::move(n)),
                      label.empty() ? "ind[" + text + "]" : label);
}

// The clamp p_{a,b}: 0 below a, 1 above b, linear in between.
inline TestFunction reparam(const Rational& a, const Rational& b, const TestFunction& inner,
                            std::string label = "") {
  if (!(0 <= a && a < b && b <= 1))
    throw validation_error("reparam thresholds must satisfy 0 <= a < b <= 1");
  FnNode n;
  n.kind = FnNode::Kind::reparam;
  n.a = a;
  n.b = b;
  n.f = inner.root();
  return TestFunction(inner.space(), make_node(std::move(n)),
                      label.empty() ? "clamp[" + to_string(a) + "," + to_string(b) + "](" +
                                          inner.label() + ")"
                                    : label);
}

inline TestFunction min_combine(const TestFunction& f, const TestFunction& g,
                                std::string label = "") {
  if (f.space() != g.space())
    throw validation_error("min_combine of functions on different spaces");
  FnNode n;
  n.kind = FnNode::Kind::min;
  n.f = f.root();
  n.g = g.root();
  return TestFunction(f.space(), make_node(std::move(n)),
                      label.empty() ? "min(" + f.label() + "," + g.label() + ")" : label);
}

// Separating bump: exactly 0 on a neighbourhood of the finite set E, exactly 1
// outside the open region U, values in [0,1]; built as the clamp p_{1/2,1} of
// min(1, dist(x,E)/delta) where delta is a positive rational clearance of E
// inside U. Empty E yields the constant 1.
inline TestFunction urysohn_fn(const std::vector<Point>& e, const Region& u,
                               std::string label = "bump") {
  FnNode n;
  n.kind = FnNode::Kind::urysohn;
  n.u_region = u;
  n.e_points = e;
  n.e_flat = flatten_points(e);
  if (e.empty()) {
    n.delta = 1;
    return TestFunction(u.space, make_node(std::move(n)), std::move(label));
  }
  std::optional<Rational> margin;
  for (const auto& p : e) {
    if (p.space != u.space) throw validation_error("urysohn point/region space mismatch");
    require_carrier(p);
    if (u.clopen) {
      if (!u.contains(p))
        throw validation_error("urysohn zero set leaves the region at " + p.str());
      Rational one(1);
      margin = margin ? std::min(*margin, one) : one;
      continue;
    }
    std::optional<Rational> clearance;
    for (const auto& ball : u.balls) {
      Rational d2 = dist2(p, ball.center);
      Rational r2 = ball.radius * ball.radius;
      if (d2 >= r2) continue;
      Rational lb;
      if (auto d = exact_sqrt(d2)) {
        lb = ball.radius - *d;  // exact clearance
      } else {
        lb = (r2 - d2) / (2 * ball.radius);  // (r-d)(r+d)/(2r) <= r-d
      }
      clearance = clearance ? std::max(*clearance, lb) : lb;
    }
    if (!clearance)
      throw validation_error("urysohn zero set leaves the region at " + p.str());
    margin = margin ? std::min(*margin, *clearance) : *clearance;
  }
  n.delta = *margin;
  return TestFunction(u.space, make_node(std::move(n)), std::move(label));
}

// Exact-when-possible integral: sum of coef * f(point) over the atoms.
inline Value integrate(const FinSuppMeasure& mu, const TestFunction& f) {
  if (mu.space() != f.space())
    throw validation_error("integrating a function over the wrong space");
  Rational exact_acc(0);
  double approx_acc = 0.0;
  bool exact = true;
  for (const auto& [p, c] : mu.atoms()) {
    Value v = f.eval(p);
    approx_acc += to_double(c) * v.approx;
    if (exact && v.exact)
      exact_acc += c * *v.exact;
    else
      exact = false;
  }
  if (exact) return Value::of(exact_acc);
  return Value::approx_only(approx_acc);
}

}  // namespace jnseq
