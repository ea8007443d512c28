#include "jnseq/analysis.hpp"

#include "jnseq/generators.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace jnseq;

namespace {

AnalysisParams params(std::size_t horizon, std::size_t window) {
  AnalysisParams p;
  p.horizon = horizon;
  p.window = window;
  return p;
}

}  // namespace

TEST_CASE("classification of square variant 1: persistent, oscillating and spiking points") {
  MeasureSequence s = gen_square(1);
  Classification cls = classify_points(s, params(100, 20));

  // (0,0) carries exactly 1/4 at every index: a limit point.
  Point origin = Point::square(Rational(0), Rational(0));
  REQUIRE(cls.points.count(origin) == 1);
  CHECK(cls.points.at(origin).label == PointLabel::limit);
  CHECK(cls.points.at(origin).estimate == Rational(1, 4));

  // (1/2,0) alternates 1/4 and 1/8: bounded away from zero but oscillating.
  Point mid = Point::square(Rational(1, 2), Rational(0));
  CHECK(cls.points.at(mid).label == PointLabel::liminf_only);
  CHECK(cls.points.at(mid).window_min == Rational(1, 8));
  CHECK(cls.points.at(mid).window_max == Rational(1, 4));

  // (1,0) lives only at odd indices: vanishes along evens.
  Point right = Point::square(Rational(1), Rational(0));
  CHECK(cls.points.at(right).label == PointLabel::limsup_only);
  CHECK(cls.points.at(right).window_min == Rational(0));
  CHECK(cls.points.at(right).window_max == Rational(1, 8));

  // A roof point from inside the window appears exactly once there.
  Point roof = Point::square(Rational(0), Rational(1, 100));
  CHECK(cls.points.at(roof).label == PointLabel::limsup_only);

  // A roof point whose index precedes the window is transient.
  Point old_roof = Point::square(Rational(0), Rational(1, 10));
  CHECK(cls.points.at(old_roof).label == PointLabel::transient);

  // Exactly one limit atom.
  REQUIRE(cls.limit_atoms.size() == 1);
  CHECK(cls.limit_atoms.at(origin) == Rational(1, 4));

  CHECK_THROWS_AS(classify_points(s, params(0, 1)), validation_error);
}

TEST_CASE("classification of the convergent-space generator") {
  Classification cls = classify_points(gen_convergent(ConvMode::to_limit), params(100, 20));
  Point zero = Point::seq(Rational(0));
  REQUIRE(cls.limit_atoms.size() == 1);
  CHECK(cls.limit_atoms.at(zero) == Rational(-1, 2));
  CHECK(cls.points.at(zero).label == PointLabel::limit);
}

TEST_CASE("pointwise extraction thins square variant 1 to the even indices") {
  AnalysisParams p = params(60, 10);
  ExtractResult res = extract_pointwise_convergent(gen_square(1), p);

  REQUIRE(res.indices.size() == 30);
  for (std::size_t i = 0; i < res.indices.size(); ++i) CHECK(res.indices[i] == 2 * i);

  // The limit along the evens: 1/4 at both surviving columns.
  CHECK(res.limit.support_size() == 2);
  CHECK(res.limit.at(Point::square(Rational(0), Rational(0))) == Rational(1, 4));
  CHECK(res.limit.at(Point::square(Rational(1, 2), Rational(0))) == Rational(1, 4));
}

TEST_CASE("pointwise extraction keeps stable sequences whole") {
  // conv: the coefficient at 0 is -1/2 at every index; roof spikes survive.
  ExtractResult conv = extract_pointwise_convergent(gen_convergent(ConvMode::to_limit),
                                                    params(60, 10));
  REQUIRE(conv.indices.size() == 60);
  CHECK(conv.limit.support_size() == 1);
  CHECK(conv.limit.at(Point::seq(Rational(0))) == Rational(-1, 2));

  // square3: rows are constant once born, tails and roofs are spikes.
  ExtractResult s3 = extract_pointwise_convergent(gen_square(3, Rational(1, 2)),
                                                  params(40, 10));
  CHECK(s3.indices.size() == 40);
  // Atoms above tau: rows k with (1-alpha)/2^(k+2) = 2^-(k+3) > 2^-20, so k <= 16.
  CHECK(s3.limit.support_size() == 17);
  CHECK(s3.limit.at(Point::square(Rational(1), Rational(0))) == Rational(1, 8));
  CHECK(s3.limit.at(Point::square(Rational(1, 2), Rational(0))) == Rational(1, 16));
  CHECK(s3.limit.at(Point::square(rational_enum(16), Rational(0))) == pow2_inv(19));
}

TEST_CASE("pointwise extraction fails loudly when every value group is too small") {
  // The coefficient at p cycles through 12 distinct values; with horizon 24
  // each group holds 2 indices, below min_keep.
  Point p = Point::interval(Rational(1, 3));
  Point q = Point::interval(Rational(2, 3));
  std::vector<FinSuppMeasure> ms;
  for (std::size_t n = 0; n < 24; ++n) {
    Rational a(static_cast<long long>(n % 12) + 1, 13);
    ms.push_back(FinSuppMeasure::make(SpaceKind::unit_interval, {{p, a}, {q, -a}}));
  }
  MeasureSequence seq = from_measures(SpaceKind::unit_interval, std::move(ms), {});
  CHECK_THROWS_AS(extract_pointwise_convergent(seq, params(24, 10)), horizon_error);

  CHECK_THROWS_AS(extract_pointwise_convergent(gen_square(1), params(4, 2)), horizon_error);
}

TEST_CASE("half split profile: exact positive mass law") {
  // For every measure, pos - neg = mu(1) and pos + neg = ||mu||; with norm one
  // that forces pos = (1 + mu(1))/2.
  for (const auto* name : {"square1", "square2", "square3", "conv"}) {
    MeasureSequence s = generator_by_name(name, Rational(1, 2));
    for (const auto& row : half_split_profile(s, 60)) {
      INFO(name << " n=" << row.n);
      CHECK(row.pos_mass == (Rational(1) + row.total_mass) / 2);
      CHECK(row.pos_mass + row.neg_mass == Rational(1));
      CHECK(row.total_mass == Rational(0));
    }
  }
  // The dyadic variant is deliberately off balance by its head mass.
  auto rows = half_split_profile(gen_square(4), 10);
  for (const auto& row : rows) {
    INFO("n=" << row.n);
    CHECK(row.total_mass == pow2_inv(static_cast<unsigned>(row.n) + 1));
    CHECK(row.pos_mass == Rational(1, 2) + pow2_inv(static_cast<unsigned>(row.n) + 2));
    CHECK(row.pos_mass + row.neg_mass == Rational(1));
  }
}

TEST_CASE("limit mass bound: honest sequences respect it, concentrated ones violate it") {
  AnalysisParams p = params(100, 20);
  LimitMassReport ok = limit_mass_bound(gen_square(1), p);
  CHECK(ok.limit_count == 1);
  CHECK(ok.mass_sum == Rational(1, 4));
  CHECK(ok.bound == Rational(1, 2) + p.tau);
  CHECK_FALSE(ok.violated);

  // A sequence parking 3/4 of its mass at a fixed point violates the bound.
  std::vector<FinSuppMeasure> ms;
  for (std::size_t n = 0; n < 40; ++n) {
    ms.push_back(FinSuppMeasure::make(
        SpaceKind::unit_square,
        {{Point::square(Rational(0), Rational(0)), Rational(3, 4)},
         {Point::square(Rational(1, 2), Rational(1, static_cast<long long>(n) + 1)),
          Rational(-1, 4)}}));
  }
  MeasureSequence parked = from_measures(SpaceKind::unit_square, std::move(ms), {});
  LimitMassReport bad = limit_mass_bound(parked, params(40, 10));
  CHECK(bad.limit_count == 1);
  CHECK(bad.mass_sum == Rational(3, 4));
  CHECK(bad.violated);

  // The classification-reusing overload answers identically.
  Classification cls = classify_points(gen_square(1), p);
  LimitMassReport again = limit_mass_bound(cls, p);
  CHECK(again.mass_sum == ok.mass_sum);
  CHECK(again.bound == ok.bound);
  CHECK(again.violated == ok.violated);
}

TEST_CASE("renormalization to the half/half sphere") {
  // The dyadic variant: distance to the sphere is exactly the head mass.
  RenormalizeResult r = renormalize_half(gen_square(4), 8);
  REQUIRE(r.kept_indices.size() == 8);
  CHECK(r.skipped_one_signed.empty());
  for (std::size_t i = 0; i < 8; ++i) {
    INFO("n=" << i);
    CHECK(r.distances[i] == pow2_inv(static_cast<unsigned>(i) + 1));
    FinSuppMeasure nu = r.sequence.at(i);
    auto parts = nu.split();
    CHECK(parts.positive.total_variation() == Rational(1, 2));
    CHECK(parts.negative.total_variation() == Rational(1, 2));
    CHECK(nu.total_variation() == Rational(1));
  }
  CHECK(r.sequence.meta().name == "square4/half");
  CHECK(r.sequence.length() == std::size_t(8));

  // Already balanced input: zero distances, nothing skipped.
  RenormalizeResult c = renormalize_half(gen_convergent(ConvMode::to_limit), 12);
  for (const auto& d : c.distances) CHECK(d == Rational(0));

  // One-signed measures are skipped and reported.
  Point x = Point::interval(Rational(1, 4));
  Point y = Point::interval(Rational(3, 4));
  std::vector<FinSuppMeasure> ms;
  ms.push_back(FinSuppMeasure::make(SpaceKind::unit_interval, {{x, Rational(1)}}));
  ms.push_back(FinSuppMeasure::make(SpaceKind::unit_interval,
                                    {{x, Rational(1, 2)}, {y, Rational(-1, 2)}}));
  MeasureSequence seq = from_measures(SpaceKind::unit_interval, std::move(ms), {});
  RenormalizeResult s = renormalize_half(seq, 2);
  CHECK(s.skipped_one_signed == std::vector<std::size_t>{0});
  CHECK(s.kept_indices == std::vector<std::size_t>{1});
  CHECK(s.distances == std::vector<Rational>{Rational(0)});
}
