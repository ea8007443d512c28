#pragma once

// Built-in measure-sequence generators on the unit square and the convergent
// sequence, all with exactly computed rational coefficients and total
// variation exactly one at every index.

#include "jnseq/sequence.hpp"

#include <mutex>

namespace jnseq {

// Enumeration of [0,1] ∩ Q without repetition: the fixed head 1, 1/2, 0, then
// every Calkin-Wilf term that falls strictly inside (0,1) (skipping 1/2 which
// the head already placed). Keeping 0 out of the first two slots means the
// square-variant constructions below never merge atoms of opposite sign, so
// their norms stay exactly one structurally.
inline const char* kRationalEnumerationId = "calkin-wilf-01/head[1,1/2,0]";

inline Rational rational_enum(std::size_t k) {
  static std::vector<Rational> cache{Rational(1), Rational(1, 2), Rational(0)};
  static Rational cw_state(1);  // last Calkin-Wilf term emitted into the cache
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  while (cache.size() <= k) {
    // x -> 1/(2*floor(x) - x + 1), starting from 1; enumerate all positive rationals
    Rational& x = cw_state;
    Int fl = num(x) / den(x);
    x = Rational(1) / (2 * Rational(fl) - x + 1);
    if (x > 0 && x < 1 && x != Rational(1, 2)) cache.push_back(x);
  }
  return cache[k];
}

// Partition of the naturals into infinitely many infinite classes:
// class(k) = number of trailing zero bits of k+1.
inline unsigned partition_class(std::uint64_t k) {
  std::uint64_t v = k + 1;
  unsigned c = 0;
  while ((v & 1) == 0) {
    v >>= 1;
    ++c;
  }
  return c;
}

// j-th member of class n: (2j+1) * 2^n - 1 (as a big integer; overflows fast).
inline Int partition_member(unsigned n, std::uint64_t j) {
  return (Int(2 * j + 1) << n) - 1;
}

namespace detail {

inline FinSuppMeasure square1_at(std::size_t n) {
  Rational h(1, static_cast<long long>(n) + 1);
  std::vector<std::pair<Point, Rational>> atoms;
  auto col = [&](Rational x, Rational coef) {
    atoms.emplace_back(Point::square(x, Rational(0)), coef);
    atoms.emplace_back(Point::square(x, h), -coef);
  };
  if (n % 2 == 0) {
    col(Rational(0), Rational(1, 4));
    col(Rational(1, 2), Rational(1, 4));
  } else {
    col(Rational(0), Rational(1, 4));
    col(Rational(1, 2), Rational(1, 8));
    col(Rational(1), Rational(1, 8));
  }
  return FinSuppMeasure::make(SpaceKind::unit_square, atoms);
}

inline FinSuppMeasure square2_at(std::size_t n) {
  Rational q = rational_enum(partition_class(n));
  Rational h(1, static_cast<long long>(n) + 1);
  return FinSuppMeasure::make(
      SpaceKind::unit_square,
      {{Point::square(q, Rational(0)), Rational(1, 2)}, {Point::square(q, h), Rational(-1, 2)}});
}

inline FinSuppMeasure square2_thin_at(std::size_t n) {
  // One index per partition class: the class-n minimum is 2^n - 1, whose
  // vertical offset 1/(k+1) is exactly 2^-n. Evaluated in closed form so the
  // parent index never has to fit in a machine word.
  Rational q = rational_enum(n);
  Rational h(Int(1), Int(1) << n);
  return FinSuppMeasure::make(
      SpaceKind::unit_square,
      {{Point::square(q, Rational(0)), Rational(1, 2)}, {Point::square(q, h), Rational(-1, 2)}});
}

inline FinSuppMeasure square3_at(std::size_t n, const Rational& alpha) {
  Rational h(1, static_cast<long long>(n) + 1);
  Rational h2(1, static_cast<long long>(n) + 2);
  std::vector<std::pair<Point, Rational>> atoms;
  for (std::size_t k = 0; k <= n; ++k) {
    Rational coef = (1 - alpha) / Rational(Int(1) << (k + 2));
    Rational q = rational_enum(k);
    atoms.emplace_back(Point::square(q, Rational(0)), coef);
    atoms.emplace_back(Point::square(q, h), -coef);
  }
  Rational tail = alpha / 2 + (1 - alpha) / Rational(Int(1) << (n + 2));
  atoms.emplace_back(Point::square(Rational(0), 1 - h), tail);
  atoms.emplace_back(Point::square(Rational(0), 1 - h2), -tail);
  return FinSuppMeasure::make(SpaceKind::unit_square, atoms);
}

// Level-n coefficient table alpha_k, k < 2^n, of the dyadic construction.
inline std::vector<Rational> square4_alphas(std::size_t n) {
  std::vector<Rational> alphas{Rational(1, 4)};
  for (std::size_t m = 1; m <= n; ++m) {
    std::vector<Rational> next(std::size_t(1) << m);
    Rational fresh = Rational(1, 2) / Rational(Int(1) << (2 * m));  // c_m / 2^m
    for (std::size_t k = 0; k < next.size(); ++k)
      next[k] = (k % 2 == 0) ? alphas[k / 2] : fresh;
    alphas = std::move(next);
  }
  return alphas;
}

constexpr std::size_t kSquare4MaxIndex = 16;  // support size 2^{n+1} beyond this is unbuildable

inline FinSuppMeasure square4_nu_at(std::size_t n) {
  if (n > kSquare4MaxIndex)
    throw validation_error("dyadic variant index " + std::to_string(n) +
                           " needs 2^" + std::to_string(n + 1) + " atoms; refusing");
  auto alphas = square4_alphas(n);
  Int denom = Int(1) << (n + 1);
  std::vector<std::pair<Point, Rational>> atoms;
  atoms.reserve(alphas.size() * 2);
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    atoms.emplace_back(Point::square(Rational(Int(2 * k), denom), Rational(0)), alphas[k]);
    atoms.emplace_back(Point::square(Rational(Int(2 * k + 1), denom), Rational(0)), -alphas[k]);
  }
  return FinSuppMeasure::make(SpaceKind::unit_square, atoms);
}

inline FinSuppMeasure square4_at(std::size_t n) {
  FinSuppMeasure head = FinSuppMeasure::make(
      SpaceKind::unit_square,
      {{Point::square(Rational(0), Rational(0)), Rational(Int(1), Int(1) << (n + 1))}});
  return head + square4_nu_at(n);
}

}  // namespace detail

// The balanced auxiliary part of the dyadic variant (norm 1 - 2^-(n+1)).
inline FinSuppMeasure square4_component(std::size_t n) { return detail::square4_nu_at(n); }

inline MeasureSequence gen_square(int variant, Rational alpha = Rational(0)) {
  if (variant < 1 || variant > 4)
    throw validation_error("square generator variant must be 1..4");
  if (variant == 3 && !(alpha >= 0 && alpha < 1))
    throw validation_error("variant 3 requires 0 <= alpha < 1");
  SequenceMeta meta;
  meta.name = "square" + std::to_string(variant);
  meta.claimed_jn = true;
  switch (variant) {
    case 1:
      meta.support_bound = 6;
      return MeasureSequence(SpaceKind::unit_square, detail::square1_at, meta);
    case 2:
      meta.support_bound = 2;
      meta.enumeration = kRationalEnumerationId;
      return MeasureSequence(SpaceKind::unit_square, detail::square2_at, meta);
    case 3:
      meta.alpha = alpha;
      meta.enumeration = kRationalEnumerationId;
      meta.name += "[alpha=" + to_string(alpha) + "]";
      return MeasureSequence(SpaceKind::unit_square,
                             [alpha](std::size_t n) { return detail::square3_at(n, alpha); },
                             meta);
    default:
      return MeasureSequence(SpaceKind::unit_square, detail::square4_at, meta);
  }
}

// One index per partition class of the second variant; disjoint supports.
inline MeasureSequence gen_square2_thinned() {
  SequenceMeta meta;
  meta.name = "square2thin";
  meta.claimed_jn = true;
  meta.claimed_disjoint = true;
  meta.support_bound = 2;
  meta.enumeration = kRationalEnumerationId;
  meta.provenance = {"square2 thinned to the first index of each partition class (k_n = 2^n - 1)"};
  return MeasureSequence(SpaceKind::unit_square, detail::square2_thin_at, meta);
}

enum class ConvMode { to_limit, paired };

inline MeasureSequence gen_convergent(ConvMode mode) {
  SequenceMeta meta;
  meta.claimed_jn = true;
  meta.support_bound = 2;
  if (mode == ConvMode::to_limit) {
    meta.name = "conv";
    return MeasureSequence(
        SpaceKind::convergent_seq,
        [](std::size_t n) {
          return FinSuppMeasure::make(
              SpaceKind::convergent_seq,
              {{Point::seq(Rational(1, static_cast<long long>(n) + 1)), Rational(1, 2)},
               {Point::seq(Rational(0)), Rational(-1, 2)}});
        },
        meta);
  }
  meta.name = "pairs";
  meta.claimed_disjoint = true;
  return MeasureSequence(
      SpaceKind::convergent_seq,
      [](std::size_t n) {
        return FinSuppMeasure::make(
            SpaceKind::convergent_seq,
            {{Point::seq(Rational(1, 2 * static_cast<long long>(n) + 1)), Rational(1, 2)},
             {Point::seq(Rational(1, 2 * static_cast<long long>(n) + 2)), Rational(-1, 2)}});
      },
      meta);
}

// Named lookup used by the command-line driver.
inline MeasureSequence generator_by_name(const std::string& name, Rational alpha = Rational(0)) {
  if (name == "square1") return gen_square(1);
  if (name == "square2") return gen_square(2);
  if (name == "square3") return gen_square(3, alpha);
  if (name == "square4") return gen_square(4);
  if (name == "square2thin") return gen_square2_thinned();
  if (name == "conv") return gen_convergent(ConvMode::to_limit);
  if (name == "pairs") return gen_convergent(ConvMode::paired);
  throw validation_error("unknown generator '" + name + "'");
}

}  // namespace jnseq
