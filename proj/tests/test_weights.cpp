#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "wbl/errors.hpp"
#include "wbl/geometry.hpp"
#include "wbl/weights.hpp"

using namespace wbl;
using testutil::Rng;

TEST(Evaluate, Examples) {
  EXPECT_DOUBLE_EQ(evaluate(im_abs_plus_power(0.5), {0.0, 1.0}), 2.0);
  EXPECT_NEAR(evaluate(log_potential({{0.0, 1.5}}), std::exp(1.0)), 1.5, 1e-15);
  EXPECT_EQ(evaluate(zero_weight(), {3.0, -7.0}), 0.0);
  EXPECT_EQ(evaluate(log_potential({{0.5, 1.0}}), 0.5), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(density(log_potential({{0.0, 1.0}}), 0.0), std::numeric_limits<double>::infinity());
}

TEST(Evaluate, OffsetIsAdded) {
  const Weight w = log_potential({{0.0, 1.0}}, 0.5, [](cplx z) { return 0.5 * std::cos(z.real()); });
  EXPECT_NEAR(evaluate(w, 2.0), std::log(2.0) + 0.5 * std::cos(2.0), 1e-15);
}

TEST(Evaluate, RejectsBadParameters) {
  EXPECT_THROW(im_abs_plus_power(0.0), InvalidArgument);
  EXPECT_THROW(im_abs_plus_power(1.0), InvalidArgument);
  EXPECT_THROW(log_potential({{0.0, -1.0}}), InvalidArgument);
  EXPECT_THROW(poly_bump_weight(Polynomial::from_taylor(0.0, {0.0, 1.0}), 0.5, 1.0), InvalidArgument);
  EXPECT_THROW(poly_bump_weight(Polynomial::from_taylor(0.0, {0.0, 1.0}), 1.0, 0.0), InvalidArgument);
}

TEST(Lelong, Examples) {
  EXPECT_DOUBLE_EQ(lelong_number(log_potential({{0.0, 1.5}}), 0.0), 1.5);
  EXPECT_DOUBLE_EQ(lelong_number(log_potential({{0.0, 1.5}}), 1.0), 0.0);
  EXPECT_DOUBLE_EQ(lelong_number(weight_sum({log_potential({{0.0, 1.0}}), log_potential({{0.0, 0.5}})}), 0.0), 1.5);
  EXPECT_DOUBLE_EQ(lelong_number(im_abs_plus_power(0.5), 0.0), 0.0);
  EXPECT_DOUBLE_EQ(lelong_number(poly_bump_weight(Polynomial::from_taylor(0.0, {0.0, 1.0}), 1.0, 1.0), 0.0), 0.0);
}

TEST(Mass, Examples) {
  EXPECT_DOUBLE_EQ(mass_on_disc(log_potential({{0.0, 1.9}}), 0.0, 1.0), 1.9);
  EXPECT_DOUBLE_EQ(mass_on_disc(log_potential({{3.0, 5.0}}), 0.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(mass_on_disc(log_potential({{0.0, 1.0}, {1.0, 0.5}, {2.0, 7.0}}), 0.0, 1.0), 1.5);
  EXPECT_THROW(mass_on_disc(im_abs_plus_power(0.5), 0.0, 1.0), UnsupportedMeasure);
  EXPECT_DOUBLE_EQ(mass_on_disc(zero_weight(), 0.0, 1.0), 0.0);
}

TEST(ConditionA, Examples) {
  EXPECT_TRUE(satisfies_condition_A(log_potential({{0.0, 1.9}})));
  EXPECT_FALSE(satisfies_condition_A(log_potential({{0.0, 2.0}})));
  EXPECT_FALSE(satisfies_condition_A(log_potential({{0.0, 1.0}, {0.5, 1.5}})));
  EXPECT_THROW(satisfies_condition_A(im_abs_plus_power(0.5)), UnsupportedMeasure);
}

TEST(PolyBump, Examples) {
  const auto p = Polynomial::from_taylor(0.0, {0.0, 1.0});
  EXPECT_DOUBLE_EQ(evaluate(poly_bump_weight(p, 1.0, 1.0), 0.5), 0.0);
  EXPECT_DOUBLE_EQ(evaluate(poly_bump_weight(p, 1.0, 1.0), 2.0), 9.0);
  EXPECT_DOUBLE_EQ(evaluate(poly_bump_weight(p, 1.0, 10.0), 2.0), 90.0);
}

TEST(Polynomial, ScaledStorage) {
  // 1 + 2(z - 1) + 3(z - 1)^2 stored with scale 2.
  const auto p = Polynomial::from_taylor(1.0, {1.0, 2.0, 3.0}, 2.0);
  EXPECT_EQ(p.degree(), 2);
  EXPECT_NEAR(std::abs(p.taylor_coefficient(2) - cplx(3.0)), 0.0, 1e-15);
  const cplx z(0.3, -1.2);
  const cplx expect = 1.0 + 2.0 * (z - 1.0) + 3.0 * (z - 1.0) * (z - 1.0);
  EXPECT_NEAR(std::abs(p(z) - expect), 0.0, 1e-14);
  EXPECT_EQ(Polynomial::from_taylor(0.0, {0.0, 0.0}).degree(), -1);
}

TEST(Properties, SumIsAdditive) {
  Rng rng(21);
  const Weight a = im_abs_plus_power(0.3);
  const Weight b = log_potential({{0.2, 0.7}, {-1.0, 0.4}});
  const Weight c = poly_bump_weight(Polynomial::from_taylor(0.0, {0.5, 0.0, 1.0}), 1.0, 2.0);
  const Weight s = weight_sum({a, b, c});
  for (int i = 0; i < 200; ++i) {
    const cplx z = rng.in_box(-2, 2, -2, 2);
    const double sum = evaluate(a, z) + evaluate(b, z) + evaluate(c, z);
    EXPECT_NEAR(evaluate(s, z), sum, 1e-12 * (1.0 + std::abs(sum)));
    EXPECT_DOUBLE_EQ(lelong_number(s, z), lelong_number(a, z) + lelong_number(b, z) + lelong_number(c, z));
  }
  EXPECT_DOUBLE_EQ(lelong_number(s, {0.2, 0.0}), 0.7);
}

TEST(Properties, MassMonotoneInRadius) {
  Rng rng(22);
  std::vector<LogAtom> atoms;
  for (int i = 0; i < 12; ++i) atoms.push_back({rng.in_box(-2, 2, -2, 2), rng.uniform(0.05, 0.5)});
  const Weight w = log_potential(atoms);
  double prev = 0.0;
  for (double r = 0.0; r <= 3.0; r += 0.01) {
    const double m = mass_on_disc(w, 0.0, r);
    EXPECT_GE(m, prev);
    prev = m;
  }
}

TEST(Properties, BumpNonnegativeAndZeroWhereSmall) {
  Rng rng(23);
  const auto p = Polynomial::from_taylor(0.0, {cplx(0.2, 0.1), 1.0, cplx(0.0, 0.5)});
  const Weight w = poly_bump_weight(p, 1.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const cplx z = rng.in_box(-2, 2, -2, 2);
    const double v = evaluate(w, z);
    EXPECT_GE(v, 0.0);
    if (std::abs(p(z)) <= 1.0) EXPECT_EQ(v, 0.0);
  }
}

TEST(Properties, SubMeanValue) {
  Rng rng(24);
  const std::vector<Weight> ws = {
      zero_weight(), im_abs_plus_power(0.5), log_potential({{0.0, 1.5}, {cplx(0.5, 0.5), 0.3}}),
      poly_bump_weight(Polynomial::from_taylor(0.0, {0.0, 1.0, 0.5}), 1.0, 1.0),
      weight_sum({im_abs_plus_power(0.7), log_potential({{-0.3, 1.0}})})};
  for (const Weight& w : ws) {
    for (int i = 0; i < 100; ++i) {
      const cplx z = rng.in_box(-2, 2, -2, 2);
      if (!std::isfinite(evaluate(w, z))) continue;
      const double r = 0.05;
      double avg = 0.0;
      const int n = 256;
      for (int k = 0; k < n; ++k) avg += evaluate(w, z + std::polar(r, 2 * std::numbers::pi * (k + 0.5) / n));
      avg /= n;
      EXPECT_LE(evaluate(w, z), avg + 1e-9) << z;
    }
  }
}

TEST(SupBound, Boxes) {
  const Domain d = Domain::disc(0.0, 1.0);
  EXPECT_DOUBLE_EQ(*sup_bound(zero_weight(), d), 0.0);
  const auto s = sup_bound(im_abs_plus_power(0.5), d);
  ASSERT_TRUE(s.has_value());
  EXPECT_GE(*s, 2.0 - 1e-12);  // |Im z| + |z|^p <= 1 + 1 on the unit disc
}
