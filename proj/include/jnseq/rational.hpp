#pragma once

// Exact arithmetic used everywhere: arbitrary-precision rationals so that
// total-variation norms, restrictions and pigeonhole tallies are exact even
// when coefficient denominators reach 2^200 and beyond.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace jnseq {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct jn_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad input data (malformed files, carrier violations, contract violations).
struct validation_error : jn_error {
  using jn_error::jn_error;
};

// The requested construction ran out of data at the given finite horizon.
struct horizon_error : jn_error {
  using jn_error::jn_error;
};

inline Int num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational rat(long long n, long long d = 1) { return Rational(n, d); }

inline Rational abs_r(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// boost's rational operator< runs a division ladder (an overflow guard that
// exact bignums do not need). cpp_rational is kept normalized with positive
// denominators, so two multiplications decide; equal denominators need none.
// This matters: point ordering inside every measure map goes through here.
inline int cmp_r(const Rational& a, const Rational& b) {
  Int ad = den(a), bd = den(b);
  if (ad == bd) {
    Int an = num(a), bn = num(b);
    return an < bn ? -1 : an == bn ? 0 : 1;
  }
  Int lhs = num(a) * bd, rhs = num(b) * ad;
  return lhs < rhs ? -1 : lhs == rhs ? 0 : 1;
}

inline bool rless(const Rational& a, const Rational& b) { return cmp_r(a, b) < 0; }

// 2^-k as an exact rational.
inline Rational pow2_inv(unsigned k) {
  return Rational(Int(1), Int(1) << k);
}

inline Rational pow2(unsigned k) { return Rational(Int(1) << k, Int(1)); }

// Canonical "p/q" formatting (always includes the denominator).
inline std::string to_string(const Rational& q) {
  return num(q).str() + "/" + den(q).str();
}

// Accepts "p/q", "p" and optional surrounding whitespace. Loud on anything else.
inline Rational parse_rational(const std::string& text) {
  auto first = text.find_first_not_of(" \t");
  auto last = text.find_last_not_of(" \t");
  if (first == std::string::npos)
    throw validation_error("empty rational literal");
  std::string body = text.substr(first, last - first + 1);
  auto slash = body.find('/');
  try {
    if (slash == std::string::npos) return Rational(Int(body));
    Int n(body.substr(0, slash));
    Int d(body.substr(slash + 1));
    if (d == 0) throw validation_error("zero denominator in '" + text + "'");
    return Rational(n, d);
  } catch (const std::exception&) {
    throw validation_error("malformed rational literal '" + text + "'");
  }
}

inline Int isqrt(const Int& n) {
  if (n < 0) throw validation_error("isqrt of negative value");
  return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const Int& n, Int* root = nullptr) {
  if (n < 0) return false;
  Int r = isqrt(n);
  if (root) *root = r;
  return r * r == n;
}

// Exact square root of a nonnegative rational, when one exists.
inline std::optional<Rational> exact_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  Int rn, rd;
  if (!is_perfect_square(num(q), &rn)) return std::nullopt;
  if (!is_perfect_square(den(q), &rd)) return std::nullopt;
  return Rational(rn, rd);
}

// Rational lower/upper bounds for sqrt(q), q >= 0, within 1/den(q)·scale of the
// true value: sqrt(n/d) is bracketed by isqrt(n*d*s^2)/(d*s) from below.
inline Rational sqrt_lower_bound(const Rational& q, unsigned scale_bits = 32) {
  if (q < 0) throw validation_error("sqrt of negative value");
  Int s = Int(1) << scale_bits;
  Int n = num(q), d = den(q);
  Int r = isqrt(n * d * s * s);
  return Rational(r, d * s);
}

inline Rational sqrt_upper_bound(const Rational& q, unsigned scale_bits = 32) {
  if (q < 0) throw validation_error("sqrt of negative value");
  Int s = Int(1) << scale_bits;
  Int n = num(q), d = den(q);
  Int r = isqrt(n * d * s * s);
  if (r * r < n * d * s * s) r += 1;
  return Rational(r, d * s);
}

inline double to_double(const Rational& q) {
  return static_cast<double>(q);
}

}  // namespace jnseq
