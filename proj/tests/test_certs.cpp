#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "wbl/certs.hpp"
#include "wbl/errors.hpp"
#include "wbl/target.hpp"

using namespace wbl;
using std::numbers::pi;

namespace {

// Frozen by tests/oracles/freeze_values.py (mpmath).
constexpr double kCp05 = 2.8284271247461901;
constexpr double kCp09 = 12.784906442999323;
constexpr double kC1M10 = 2.7302201500693456;
constexpr double kYM10 = 159.22934536650913;
constexpr double kEps0SqM10 = 1.2225582500722538e-105;
constexpr double kU01 = 1.414213562373095;
constexpr double kU11 = 1.5537739740300373;
constexpr double kU10 = 3.1624357780040372;
constexpr double kFarAtom = 0.31455344477943592;

}  // namespace

TEST(Cp, Values) {
  EXPECT_NEAR(cp_constant(0.5), kCp05, 1e-15);
  EXPECT_NEAR(cp_constant(0.9), kCp09, 1e-12);
  EXPECT_NEAR(cp_constant(1e-9), 2.0, 1e-12);
  EXPECT_THROW(cp_constant(0.0), OutOfRange);
  EXPECT_THROW(cp_constant(1.0), OutOfRange);
  EXPECT_THROW(cp_constant(-0.2), OutOfRange);
}

TEST(Poisson, Values) {
  EXPECT_NEAR(poisson_extension(0.5, 0.0, 1.0), kU01, 1e-12 * kU01);
  EXPECT_NEAR(poisson_extension(0.5, 1.0, 1.0), kU11, 1e-12 * kU11);
  EXPECT_NEAR(poisson_extension(0.5, 10.0, 1e-3), kU10, 1e-11 * kU10);
  EXPECT_NEAR(poisson_extension(0.5, 0.0, 2.0) / poisson_extension(0.5, 0.0, 1.0), std::pow(2.0, 0.5), 1e-12);
  const double s = std::pow(2.0, 0.25);
  EXPECT_GT(kU11, 0.25 * s);
  EXPECT_LT(kU11, cp_constant(0.5) * s);
  EXPECT_THROW(poisson_extension(0.5, 0.0, 0.0), InvalidArgument);
}

TEST(Poisson, SandwichOnSamples) {
  const auto pts = log_spaced_half_plane(100);
  ASSERT_EQ(pts.size(), 100u);
  for (const cplx z : pts) EXPECT_GT(z.imag(), 0.0);
  const PoissonReport rep = poisson_bounds_check(0.5, pts);
  EXPECT_EQ(rep.samples, 100u);
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_GT(rep.min_lower_ratio, 1.0);
  EXPECT_LT(rep.max_upper_ratio, 1.0);

  const cplx at_i(0.0, 1.0);
  const PoissonReport one = poisson_bounds_check(0.5, {&at_i, 1});
  EXPECT_NEAR(one.min_lower_ratio, 4.0 * std::sqrt(2.0), 1e-11);
}

TEST(Poisson, SandwichForRandomP) {
  testutil::Rng rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    const double p = rng.uniform(0.05, 0.95);
    std::vector<cplx> pts;
    for (int i = 0; i < 25; ++i) pts.push_back(std::polar(std::pow(10.0, rng.uniform(-2, 2)), rng.uniform(0.01, pi - 0.01)));
    const PoissonReport rep = poisson_bounds_check(p, pts);
    EXPECT_EQ(rep.violations, 0u) << p;
  }
}

TEST(Potential, Cases) {
  const Domain d = Domain::disc(0.0, 1.0);
  QuadOptions o;
  o.tol = 1e-11;
  {
    const double a[] = {1.0};
    const cplx z[] = {0.0};
    const auto r = potential_mass_bound(a, z, d, o);
    EXPECT_NEAR(r.integral, 2 * pi, 1e-9);
    EXPECT_NEAR(r.lebesgue_bound, 2 * pi, 1e-14);
    EXPECT_NEAR(r.area_bound, 1.0, 1e-14);
    EXPECT_NEAR(r.radius, 1.0, 1e-14);
  }
  {
    const double a[] = {1.0};
    const cplx z[] = {10.0};
    const auto r = potential_mass_bound(a, z, d, o);
    EXPECT_NEAR(r.integral, kFarAtom, 1e-10);
    EXPECT_NEAR(r.integral, pi / 10, 0.01);
  }
  {
    const double a[] = {0.5, 0.5};
    const cplx z[] = {-0.5, 0.5};
    const auto r = potential_mass_bound(a, z, d, o);
    EXPECT_LE(r.integral, 2 * pi);
    EXPECT_NEAR(r.alpha, 1.0, 0.0);
  }
  const double big[] = {1.2, 0.8};
  const cplx two[] = {0.0, 0.5};
  EXPECT_THROW(potential_mass_bound(big, two, d), MassTooLarge);
  const double one[] = {1.0};
  EXPECT_THROW(potential_mass_bound(one, two, d), InvalidArgument);
}

TEST(Potential, RandomConfigurationsStayBelowBound) {
  testutil::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(1, 3);
    std::vector<double> a;
    std::vector<cplx> z;
    double room = 1.9;
    for (int i = 0; i < n; ++i) {
      const double ai = rng.uniform(0.05, room / (n - i));
      room -= ai;
      a.push_back(ai);
      z.push_back(rng.in_disc(0.0, 2.0));
    }
    const double R = rng.uniform(0.5, 2.0);
    const auto r = potential_mass_bound(a, z, Domain::disc(rng.in_disc(0.0, 1.0), R));
    EXPECT_LE(r.integral, r.lebesgue_bound + r.err) << trial;
    EXPECT_NEAR(r.radius, R, 1e-12);
  }
}

TEST(Certificate, FrozenValues) {
  const auto c = nondensity_certificate(0.5, 10.0);
  EXPECT_NEAR(c.C_p, kCp05, 1e-15);
  EXPECT_NEAR(c.C_1, kC1M10, 1e-14);
  EXPECT_NEAR(c.r_star, 32.0, 1e-12);
  EXPECT_NEAR(c.Y, kYM10, 1e-9 * kYM10);
  EXPECT_NEAR(c.epsilon0_sq / kEps0SqM10, 1.0, 1e-6);
  EXPECT_EQ(c.gap_samples, 10000u);
  EXPECT_GT(c.gap_min, 0.0);
  // The defining gap inequality directly, in the exponential form.
  for (double r : {c.Y, 1.5 * c.Y, 10 * c.Y}) {
    EXPECT_GT(r / 4, std::log1p(4.0 * std::exp(c.C_1 + c.C_p * std::sqrt(r))));
  }
  EXPECT_GT(c.Y, 1.0);
}

TEST(Certificate, MonotoneInM) {
  double prev = INFINITY;
  for (double M : {1.5, 2.0, 5.0, 10.0, 100.0, 1e4}) {
    const auto c = nondensity_certificate(0.5, M);
    EXPECT_LE(c.log_epsilon0_sq, prev) << M;
    EXPECT_LE(c.epsilon0_sq, 1.0);
    prev = c.log_epsilon0_sq;
  }
}

TEST(Certificate, CapAndErrors) {
  testutil::Rng rng(51);
  for (int i = 0; i < 30; ++i) {
    const auto c = nondensity_certificate(rng.uniform(0.05, 0.7), rng.uniform(1.01, 1e3));
    EXPECT_LE(c.epsilon0_sq, 1.0);
    if (c.log_epsilon0_sq < 0.0) EXPECT_DOUBLE_EQ(c.epsilon0_sq, std::exp(c.log_epsilon0_sq));
  }
  EXPECT_THROW(nondensity_certificate(0.5, 1.0), InvalidArgument);
  EXPECT_THROW(nondensity_certificate(1.0, 10.0), OutOfRange);
  EXPECT_THROW(nondensity_certificate(0.99, 1e6), NoValidY);
}

TEST(PointwiseBound, Disc) {
  const Domain d = Domain::disc(0.0, 1.0);
  EXPECT_NEAR(pointwise_eval_bound(d, zero_weight(), 0.0, std::sqrt(pi)), 1.0, 1e-15);
  EXPECT_GT(pointwise_eval_bound(d, zero_weight(), 0.999999, 1.0), 1e5);
  EXPECT_THROW(pointwise_eval_bound(d, zero_weight(), 1.5, 1.0), InvalidArgument);
  const Weight opaque = log_potential({}, INFINITY, [](cplx z) { return std::norm(z); });
  EXPECT_THROW(pointwise_eval_bound(d, opaque, 0.0, 1.0), UnboundedWeight);
  // sup phi over |z| < 5 is 5 + sqrt(5); the box estimate may only be larger.
  EXPECT_GE(pointwise_eval_bound(Domain::truncated_plane(5.0), im_abs_plus_power(0.5), 0.0, 1.0),
            std::sqrt(std::exp(5.0 + std::sqrt(5.0)) / pi) / 5.0);
}

TEST(PointwiseBound, RandomPolynomials) {
  testutil::Rng rng(61);
  const Domain d = Domain::moon({0.0, 2.0}, {1.3, 0.7});
  const Weight w = log_potential({{-1.0, 0.6}});
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<cplx> c(rng.integer(1, 11));
    for (auto& x : c) x = rng.gaussian_complex();
    const Polynomial p(0.0, 2.0, c);
    const auto n = weighted_norm_sq(polynomial_target(p), d, w);
    const double norm = std::sqrt(n.value + n.err);
    for (int i = 0; i < 100;) {
      const cplx z = rng.in_disc(0.0, 2.0);
      if (!d.contains(z)) continue;
      ++i;
      EXPECT_LE(std::abs(p(z)), pointwise_eval_bound(d, w, z, norm) * (1 + 1e-12)) << trial << ' ' << z;
    }
  }
}

TEST(MoonConstant, UniformBoundOnProbeCircle) {
  const Domain m = Domain::moon({0.0, 2.0}, {1.3, 0.7});
  const auto k = moon_eval_constant(m, zero_weight());
  EXPECT_NEAR(k.c_prime, 1.0 / (std::sqrt(pi) * k.tangency.c), 1e-14);
  EXPECT_NEAR(std::abs(k.tangency.q - cplx(2.0)), 0.0, 1e-12);
  testutil::Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<cplx> c(rng.integer(1, 5));
    for (auto& x : c) x = rng.gaussian_complex();
    const Polynomial p(0.0, 2.0, c);
    const double norm = std::sqrt(weighted_norm_sq(polynomial_target(p), m, zero_weight()).value);
    for (int i = 1; i < 400; ++i) {
      const cplx z = k.tangency.probe.center + std::polar(k.tangency.probe.radius, 2 * pi * i / 400.0);
      if (!m.contains(z)) continue;
      EXPECT_LE(std::abs((z - k.tangency.q) * (z - k.tangency.q) * p(z)), k.c_prime * norm * (1 + 1e-9)) << z;
    }
  }
}

TEST(Enclosure, CosHalf) {
  const auto e = cos_half_norm_enclosure(0.5, 40.0);
  EXPECT_NEAR(e.truncated_sq, 17.7233890593652, std::max(e.err, 1e-7 * 17.72));
  EXPECT_NEAR(e.tail, 9.3875672109603735851, 1e-8);
  EXPECT_LE(e.lower * e.lower, 17.7233890593652);
  EXPECT_GE(e.upper * e.upper * (1 + 1e-14), 17.7233890593652 + e.tail);
}
