#include "jnseq/verify.hpp"

#include "jnseq/generators.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace jnseq;

TEST_CASE("decay rows of square variant 1 obey the Lipschitz envelope") {
  // Every corpus member is 8-Lipschitz and the positive column masses sum to
  // 1/2, so |mu_n(f)| <= 8 * h * 1/2 = 4/(n+1) row by row.
  MeasureSequence s = gen_square(1);
  DecayReport rep = weak_star_report(s, corpus(s.space()), 120, Rational(1, 16));
  REQUIRE(rep.rows.size() == 120);
  for (const auto& row : rep.rows) {
    INFO("n=" << row.n << " argmax=" << row.argmax);
    Rational bound(4, static_cast<long long>(row.n) + 1);
    CHECK(row.norm_defect == Rational(0));
    if (row.max_abs_exact)
      CHECK(*row.max_abs_exact <= bound);
    else
      CHECK(row.max_abs <= to_double(bound) + 1e-9);
    CHECK(row.support_size == (row.n % 2 == 0 ? 4 : 6));
  }
  CHECK_FALSE(rep.refuted);
  CHECK(rep.tail_start == 90);
}

TEST_CASE("the fitted decay exponent matches the construction rate") {
  MeasureSequence s1 = gen_square(1);
  DecayReport r1 = weak_star_report(s1, corpus(s1.space()), 80, Rational(1, 4));
  REQUIRE(r1.fitted_exponent.has_value());
  CHECK(std::abs(*r1.fitted_exponent + 1.0) < 0.15);  // ~ 1/(n+1)

  MeasureSequence thin = gen_square2_thinned();
  DecayReport r2 = weak_star_report(thin, corpus(thin.space()), 30, Rational(1, 4));
  REQUIRE(r2.fitted_exponent.has_value());
  CHECK(*r2.fitted_exponent < -5.0);  // exponential in n decays far faster
}

TEST_CASE("certificates pass for honest generators at matched tolerances") {
  MeasureSequence conv = gen_convergent(ConvMode::to_limit);
  Certificate cert = jn_certificate(conv, corpus(conv.space()), 60, Rational(1, 4));
  CHECK(cert.norms_ok);
  CHECK_FALSE(cert.decay.refuted);
  CHECK(cert.half_balance_ok);
  CHECK(cert.ok);

  MeasureSequence pairs = gen_convergent(ConvMode::paired);
  Certificate cp = jn_certificate(pairs, corpus(pairs.space()), 60, Rational(1, 4));
  CHECK(cp.ok);
}

TEST_CASE("an over-tight epsilon refutes with a concrete witness") {
  MeasureSequence conv = gen_convergent(ConvMode::to_limit);
  Certificate cert = jn_certificate(conv, corpus(conv.space()), 30, pow2_inv(10));
  CHECK(cert.norms_ok);
  CHECK(cert.decay.refuted);
  CHECK_FALSE(cert.ok);
  REQUIRE(cert.decay.witness.has_value());
  const RefutationWitness& w = *cert.decay.witness;
  CHECK(w.n >= cert.decay.tail_start);
  CHECK_FALSE(w.label.empty());
  if (w.exact)
    CHECK(*w.exact > pow2_inv(10));
  else
    CHECK(w.value > to_double(pow2_inv(10)));
}

TEST_CASE("norm defects are caught at the first offending index") {
  MeasureSequence conv = gen_convergent(ConvMode::to_limit);
  MeasureSequence shrunk(
      conv.space(), [conv](std::size_t n) { return conv.at(n).scaled(Rational(9, 10)); },
      conv.meta());
  Certificate cert = jn_certificate(shrunk, corpus(conv.space()), 20, Rational(1, 4));
  CHECK_FALSE(cert.norms_ok);
  CHECK_FALSE(cert.ok);
  REQUIRE(cert.first_norm_defect.has_value());
  CHECK(cert.first_norm_defect->n == 0);
  CHECK(cert.first_norm_defect->total_variation == Rational(9, 10));
}

TEST_CASE("half balance violations report the positive and negative masses") {
  // The dyadic variant sits at pos = 1/2 + 2^-(n+2): inside a 2^-8 tolerance
  // once n is large, outside a 2^-20 tolerance everywhere at this horizon.
  MeasureSequence s = gen_square(4);
  Certificate pass = jn_certificate(s, corpus(s.space()), 12, Rational(1, 4), pow2_inv(8));
  CHECK(pass.half_balance_ok);

  Certificate fail = jn_certificate(s, corpus(s.space()), 12, Rational(1, 4), pow2_inv(20));
  CHECK_FALSE(fail.half_balance_ok);
  CHECK_FALSE(fail.ok);
  REQUIRE(fail.first_half_violation.has_value());
  CHECK(fail.first_half_violation->n == 9);  // tail starts at 12 - 3
  CHECK(fail.first_half_violation->pos_mass == Rational(1, 2) + pow2_inv(11));
  CHECK(fail.first_half_violation->neg_mass == Rational(1, 2) - pow2_inv(11));
}

TEST_CASE("parallel decay reports are identical to serial ones") {
  MeasureSequence s = gen_square(2);
  DecayReport serial = weak_star_report(s, corpus(s.space()), 64, Rational(1, 16), 1);
  DecayReport parallel = weak_star_report(s, corpus(s.space()), 64, Rational(1, 16), 4);
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t n = 0; n < serial.rows.size(); ++n) {
    CHECK(serial.rows[n].max_abs == parallel.rows[n].max_abs);
    CHECK(serial.rows[n].max_abs_exact == parallel.rows[n].max_abs_exact);
    CHECK(serial.rows[n].argmax == parallel.rows[n].argmax);
    CHECK(serial.rows[n].norm_defect == parallel.rows[n].norm_defect);
  }
  CHECK(serial.refuted == parallel.refuted);
  CHECK(serial.sup_tail == parallel.sup_tail);
}

TEST_CASE("disjointness checks find the first collision") {
  CHECK(disjointness_check(gen_convergent(ConvMode::paired), 100).ok);
  CHECK(disjointness_check(gen_square2_thinned(), 60).ok);

  DisjointnessReport rep = disjointness_check(gen_square(1), 10);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.collision.has_value());
  CHECK(*rep.collision == Point::square(Rational(0), Rational(0)));
  CHECK(rep.first_index == 0);
  CHECK(rep.second_index == 1);
}

TEST_CASE("report construction validates its inputs") {
  MeasureSequence s = gen_square(1);
  CHECK_THROWS_AS(weak_star_report(s, corpus(s.space()), 0), validation_error);
  CHECK_THROWS_AS(weak_star_report(s, {}, 10), validation_error);
}
