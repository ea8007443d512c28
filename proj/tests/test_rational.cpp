#include "jnseq/rational.hpp"
#include "jnseq/space.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"

using namespace jnseq;

TEST_CASE("rational formatting always includes the denominator") {
  CHECK(to_string(Rational(0)) == "0/1");
  CHECK(to_string(Rational(3)) == "3/1");
  CHECK(to_string(Rational(-7, 2)) == "-7/2");
  CHECK(to_string(Rational(2, 4)) == "1/2");
}

TEST_CASE("rational parsing round-trips and normalizes") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("  -5 ") == Rational(-5));
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
  CHECK(parse_rational("0/9") == Rational(0));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    Rational q = oracle::random_rational(rng, 1'000'000);
    CHECK(parse_rational(to_string(q)) == q);
  }
}

TEST_CASE("rational parsing rejects junk loudly") {
  CHECK_THROWS_AS(parse_rational(""), validation_error);
  CHECK_THROWS_AS(parse_rational("   "), validation_error);
  CHECK_THROWS_AS(parse_rational("1/0"), validation_error);
  CHECK_THROWS_AS(parse_rational("0.5"), validation_error);
  CHECK_THROWS_AS(parse_rational("1e-3"), validation_error);
  CHECK_THROWS_AS(parse_rational("one/two"), validation_error);
  CHECK_THROWS_AS(parse_rational("1/2/3"), validation_error);
  // The sign belongs on the numerator; denominators must be positive.
  CHECK_THROWS_AS(parse_rational("6/-4"), validation_error);
}

TEST_CASE("cmp_r agrees with the built-in ordering") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 2000; ++i) {
    Rational a = oracle::random_rational(rng, 10'000);
    Rational b = oracle::random_rational(rng, 10'000);
    int expected = a < b ? -1 : a == b ? 0 : 1;
    CHECK(cmp_r(a, b) == expected);
    CHECK(rless(a, b) == (a < b));
  }
  CHECK(cmp_r(Rational(1, 3), Rational(2, 3)) == -1);
  CHECK(cmp_r(Rational(2, 3), Rational(2, 3)) == 0);
  CHECK(cmp_r(Rational(-1, 3), Rational(-2, 3)) == 1);
}

TEST_CASE("power-of-two helpers") {
  CHECK(pow2_inv(0) == Rational(1));
  CHECK(pow2_inv(10) == Rational(1, 1024));
  CHECK(pow2(0) == Rational(1));
  CHECK(pow2(10) == Rational(1024));
  CHECK(pow2_inv(80) * pow2(80) == Rational(1));
}

TEST_CASE("integer square root edge cases") {
  CHECK(isqrt(Int(0)) == 0);
  CHECK(isqrt(Int(1)) == 1);
  CHECK(isqrt(Int(8)) == 2);
  CHECK(isqrt(Int(9)) == 3);
  CHECK(isqrt(Int("1000000000000000000000000")) == Int("1000000000000"));
  CHECK_THROWS_AS(isqrt(Int(-1)), validation_error);

  Int root;
  CHECK(is_perfect_square(Int(49), &root));
  CHECK(root == 7);
  CHECK_FALSE(is_perfect_square(Int(50)));
  CHECK_FALSE(is_perfect_square(Int(-4)));
}

TEST_CASE("exact square roots of rationals") {
  CHECK(exact_sqrt(Rational(9, 16)) == Rational(3, 4));
  CHECK(exact_sqrt(Rational(0)) == Rational(0));
  CHECK_FALSE(exact_sqrt(Rational(1, 2)).has_value());
  CHECK_FALSE(exact_sqrt(Rational(-1, 4)).has_value());
}

TEST_CASE("sqrt bounds bracket the true root") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    Rational q = abs_r(oracle::random_rational(rng, 5000));
    Rational lo = sqrt_lower_bound(q);
    Rational hi = sqrt_upper_bound(q);
    CHECK(lo * lo <= q);
    CHECK(hi * hi >= q);
    CHECK(lo <= hi);
    // The bracket is tight: width below 2^-30 for these magnitudes.
    CHECK(hi - lo <= pow2_inv(30));
  }
  // Exact squares collapse the bracket.
  CHECK(sqrt_lower_bound(Rational(9, 4)) == Rational(3, 2));
  CHECK(sqrt_upper_bound(Rational(9, 4)) == Rational(3, 2));
}

TEST_CASE("error hierarchy keeps validation and horizon failures distinct") {
  CHECK_THROWS_AS(throw validation_error("x"), jn_error);
  CHECK_THROWS_AS(throw horizon_error("x"), jn_error);
  bool horizon_is_not_validation = true;
  try {
    throw horizon_error("deliberate");
  } catch (const validation_error&) {
    horizon_is_not_validation = false;
  } catch (const jn_error&) {
  }
  CHECK(horizon_is_not_validation);
}

TEST_CASE("prefiltered nearest-distance matches the naive exact scan") {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 60; ++rep) {
    std::vector<Point> pts;
    std::uniform_int_distribution<long long> grid(0, 40);
    std::uniform_int_distribution<std::size_t> count(1, 30);
    std::size_t n = count(rng);
    for (std::size_t i = 0; i < n; ++i)
      pts.push_back(Point::square(Rational(grid(rng), 40), Rational(grid(rng), 40)));
    auto flat = flatten_points(pts);
    Point probe = Point::square(Rational(grid(rng), 40), Rational(grid(rng), 40));
    CHECK(min_dist2_exact(probe, pts, flat) == oracle::naive_min_dist2(probe, pts));
  }
}

TEST_CASE("prefiltered nearest-distance survives near-ties") {
  // Two candidates whose squared distances differ in the last rational digit,
  // far below double resolution of the sqrt-based filter.
  Rational eps = pow2_inv(100);
  std::vector<Point> pts = {
      Point::square(Rational(1, 4), Rational(0)),
      Point::square(Rational(1, 4) + eps, Rational(0)),
      Point::square(Rational(3, 4), Rational(3, 4)),
  };
  auto flat = flatten_points(pts);
  Point probe = Point::square(Rational(1, 2), Rational(0));
  Rational expected = dist2(probe, pts[1]);  // the nudged point is closer
  CHECK(expected < dist2(probe, pts[0]));
  CHECK(min_dist2_exact(probe, pts, flat) == expected);
  CHECK(min_dist2_exact(probe, pts, flat) == oracle::naive_min_dist2(probe, pts));
}
