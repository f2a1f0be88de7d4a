#include "wbl/certs.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wbl/errors.hpp"
#include "wbl/target.hpp"

namespace wbl {

namespace {

constexpr double kPi = std::numbers::pi;

// log(1 + 4 e^a) without overflow.
double log1p_4exp(double a) {
  if (a < 30.0) return std::log1p(4.0 * std::exp(a));
  return a + std::log(4.0) + std::log1p(0.25 * std::exp(-a));
}

struct Piece {
  double value = 0.0;
  double err = 0.0;
  double l1 = 0.0;
};

}  // namespace

double cp_constant(double p) {
  if (!(p > 0.0 && p < 1.0)) throw OutOfRange("p must lie in (0, 1)");
  return 2.0 / std::cos(p * kPi / 2.0);
}

double poisson_extension(double p, double x, double y, double tol) {
  if (!(y > 0.0)) throw InvalidArgument("poisson_extension needs y > 0");
  if (!(p > 0.0 && p < 1.0)) throw OutOfRange("p must lie in (0, 1)");
  auto f = [&](double tau) { return std::pow(std::abs(x + y * tau), p) / (tau * tau + 1.0); };
  const double kink = -x / y;
  const double lo = std::min(kink, 0.0);
  const double hi = std::max(kink, 0.0);

  boost::math::quadrature::tanh_sinh<double> rule;
  const double rtol = std::max(tol, 1e-15);
  auto finite = [&](double a, double b) {
    Piece pc;
    if (b > a) pc.value = rule.integrate(f, a, b, rtol, &pc.err, &pc.l1);
    return pc;
  };
  // Tails decay like |tau|^{p-2}, which exp_sinh turns into double-exponential decay.
  boost::math::quadrature::exp_sinh<double> half_line;
  auto tail = [&](double a, double sign) {
    Piece pc;
    auto g = [&](double t) { return f(a + sign * t); };
    pc.value = half_line.integrate(g, 0.0, std::numeric_limits<double>::infinity(), rtol, &pc.err, &pc.l1);
    return pc;
  };
  const Piece parts[3] = {tail(lo, -1.0), finite(lo, hi), tail(hi, 1.0)};
  double value = 0.0, err = 0.0, l1 = 0.0;
  for (const auto& pc : parts) {
    value += pc.value;
    err += pc.err;
    l1 += pc.l1;
  }
  value /= kPi;
  err /= kPi;
  l1 /= kPi;
  if (!(err <= std::max(tol, 1e-15) * std::max(l1, 1e-300)) || !std::isfinite(value)) {
    throw ToleranceNotMet("Poisson integral did not reach tolerance", value, err);
  }
  return value;
}

std::vector<cplx> log_spaced_half_plane(std::size_t n) {
  std::vector<cplx> out;
  out.reserve(n);
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = n > 1 ? static_cast<double>(k) / static_cast<double>(n - 1) : 0.5;
    const double r = std::pow(10.0, -2.0 + 4.0 * t);
    double frac = std::fmod(static_cast<double>(k + 1) * golden, 1.0);
    const double theta = kPi * (0.01 + 0.98 * frac);
    out.push_back(std::polar(r, theta));
  }
  return out;
}

PoissonReport poisson_bounds_check(double p, std::span<const cplx> samples, double tol) {
  const double cp = cp_constant(p);
  PoissonReport rep;
  rep.min_lower_ratio = std::numeric_limits<double>::infinity();
  rep.max_upper_ratio = 0.0;
  for (const cplx z : samples) {
    if (!(z.imag() > 0.0)) throw InvalidArgument("Poisson samples need y > 0");
    const double u = poisson_extension(p, z.real(), z.imag(), tol);
    const double zp = std::pow(std::abs(z), p);
    const double lower = u / (0.25 * zp);
    const double upper = u / (cp * zp);
    if (lower < rep.min_lower_ratio) {
      rep.min_lower_ratio = lower;
      rep.tightest_lower = z;
    }
    if (upper > rep.max_upper_ratio) {
      rep.max_upper_ratio = upper;
      rep.tightest_upper = z;
    }
    ++rep.samples;
    if (!(u * (1.0 - tol) > 0.25 * zp && u * (1.0 + tol) < cp * zp)) {
      ++rep.violations;
      std::ostringstream msg;
      msg.precision(17);
      msg << "Poisson sandwich violated at x=" << z.real() << " y=" << z.imag() << " U=" << u;
      throw BoundViolated(msg.str());
    }
  }
  return rep;
}

PotentialBound potential_mass_bound(std::span<const double> alphas, std::span<const cplx> points, const Domain& area,
                                    const QuadOptions& opts) {
  if (alphas.size() != points.size() || alphas.empty()) {
    throw InvalidArgument("need one mass per point");
  }
  PotentialBound out;
  std::vector<SingularPoint> sing;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0)) throw InvalidArgument("masses must be positive");
    out.alpha += alphas[i];
    sing.push_back({points[i], alphas[i]});
  }
  if (!(out.alpha < 2.0)) throw MassTooLarge("total mass must be below 2");
  const std::vector<double> a(alphas.begin(), alphas.end());
  const std::vector<cplx> z(points.begin(), points.end());
  auto g = [&](cplx w) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::log(std::abs(w - z[i]));
    return cplx(std::exp(-s), 0.0);
  };
  const QuadResult q = integrate(area, g, sing, opts);
  out.integral = q.value.real();
  out.err = q.err;
  out.radius = std::sqrt(domain_area(area) / kPi);
  out.area_bound = std::pow(out.radius, 2.0 - out.alpha) / (2.0 - out.alpha);
  out.lebesgue_bound = 2.0 * kPi * out.area_bound;
  const double slack = out.err + 64.0 * std::numeric_limits<double>::epsilon() * out.lebesgue_bound;
  if (out.integral > out.lebesgue_bound + slack) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "potential integral " << out.integral << " exceeds " << out.lebesgue_bound;
    throw BoundViolated(msg.str());
  }
  return out;
}

NonDensityCertificate nondensity_certificate(double p, double M) {
  NonDensityCertificate c;
  c.p = p;
  c.M = M;
  c.C_p = cp_constant(p);
  if (!(M > 1.0) || !std::isfinite(M)) throw InvalidArgument("M must exceed 1");
  c.C_1 = std::log(M) + 1.0 - std::log(std::sqrt(kPi));
  const double cp = c.C_p, c1 = c.C_1;
  auto g = [&](double r) { return r / 4.0 - log1p_4exp(c1 + cp * std::pow(r, p)); };

  // g < 0 up to the stationary point r* and g' > 0 beyond it, so the root
  // is unique and g stays positive past it.
  c.r_star = std::pow(4.0 * cp * p, 1.0 / (1.0 - p));
  constexpr double cap = 1e6;
  double lo = std::max(1.0, c.r_star);
  if (lo > cap) throw NoValidY("stationary point beyond the search cap");
  double y;
  if (g(lo) > 0.0) {
    y = lo;
  } else {
    double hi = 2.0 * lo;
    while (!(g(hi) > 0.0)) {
      lo = hi;
      hi *= 2.0;
      if (hi > cap) {
        if (g(cap) > 0.0) {
          hi = cap;
          break;
        }
        throw NoValidY("no admissible Y below 1e6");
      }
    }
    for (int it = 0; it < 400 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) > 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    y = hi;
  }
  c.Y = y;
  c.log_epsilon0_sq = std::log(kPi / 3.0) + 2.0 * c1 + 2.0 * cp * std::pow(y, p) - 2.0 * y;
  c.epsilon0_sq = c.log_epsilon0_sq >= 0.0 ? 1.0 : std::exp(c.log_epsilon0_sq);

  c.gap_samples = 10000;
  c.gap_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.gap_samples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(c.gap_samples - 1);
    const double r = y * std::pow(10.0, t);
    c.gap_min = std::min(c.gap_min, g(r));
  }
  if (!(c.gap_min > 0.0)) throw NoValidY("gap inequality fails on [Y, 10Y]");
  return c;
}

double pointwise_eval_bound(const Domain& domain, const Weight& w, cplx z, double normP) {
  if (!(normP >= 0.0)) throw InvalidArgument("norm must be non-negative");
  const auto sup = sup_bound(w, domain);
  if (!sup || !std::isfinite(*sup)) throw UnboundedWeight("no finite bound for sup phi");
  const double d = domain.boundary_distance(z);
  if (!(d > 0.0)) throw InvalidArgument("point is not interior");
  return std::sqrt(std::exp(*sup) / kPi) * normP / d;
}

NormEnclosure cos_half_norm_enclosure(double p, double radius, const QuadOptions& opts) {
  if (!(radius > 0.0)) throw InvalidArgument("radius must be positive");
  const Weight w = im_abs_plus_power(p);
  const NormResult r = weighted_norm_sq(make_target("cos-half"), Domain::truncated_plane(radius), w, opts);
  NormEnclosure out;
  out.radius = radius;
  out.truncated_sq = r.value;
  out.err = r.err;
  out.tail = r.tail.value_or(truncation_tail(w, radius, 1.0, 1.0));
  out.lower = std::sqrt(std::max(0.0, r.value - r.err));
  out.upper = std::sqrt(r.value + r.err + out.tail);
  return out;
}

MoonEvalConstant moon_eval_constant(const Domain& moon, const Weight& w, std::optional<double> probe_radius,
                                    std::size_t samples) {
  MoonEvalConstant out;
  out.tangency = moon_tangency(moon, probe_radius, samples);
  const auto sup = sup_bound(w, moon);
  if (!sup || !std::isfinite(*sup)) throw UnboundedWeight("no finite bound for sup phi");
  out.sup_phi = *sup;
  out.c_prime = std::sqrt(std::exp(*sup) / kPi) / out.tangency.c;
  return out;
}

}  // namespace wbl
