#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wbl/geometry.hpp"
#include "wbl/quad.hpp"
#include "wbl/weights.hpp"

namespace wbl {

/// 2 / cos(p pi / 2). Throws OutOfRange unless 0 < p < 1.
double cp_constant(double p);

/// Poisson integral (1/pi) int y |t|^p / ((x - t)^2 + y^2) dt of |t|^p,
/// evaluated as (1/pi) int |x + y tau|^p / (tau^2 + 1) dtau.
/// `tol` is relative. Throws ToleranceNotMet.
double poisson_extension(double p, double x, double y, double tol = 1e-12);

struct PoissonReport {
  std::size_t samples = 0;
  double min_lower_ratio = 0.0;  // min U / (|z|^p / 4)
  double max_upper_ratio = 0.0;  // max U / (C_p |z|^p)
  cplx tightest_lower;
  cplx tightest_upper;
  std::size_t violations = 0;
};

/// Checks |z|^p / 4 < U(z) < C_p |z|^p at every sample (x + iy, y > 0).
/// Throws BoundViolated naming the first offending sample.
PoissonReport poisson_bounds_check(double p, std::span<const cplx> samples, double tol = 1e-10);

/// n samples in the upper half plane with log-spaced modulus in [1e-2, 1e2]
/// and angles spread over (0, pi).
std::vector<cplx> log_spaced_half_plane(std::size_t n);

struct PotentialBound {
  double integral = 0.0;
  double err = 0.0;
  double radius = 0.0;  // R with area = pi R^2
  double alpha = 0.0;   // total mass
  double area_bound = 0.0;     // R^{2-a} / (2-a)
  double lebesgue_bound = 0.0;  // 2 pi R^{2-a} / (2-a)
};

/// int_A prod |z - z_i|^{-alpha_i} dlambda with the two bounds. Throws
/// MassTooLarge when sum alpha_i >= 2, BoundViolated when the integral
/// exceeds the Lebesgue bound.
PotentialBound potential_mass_bound(std::span<const double> alphas, std::span<const cplx> points, const Domain& area,
                                    const QuadOptions& opts = {});

struct NonDensityCertificate {
  double p = 0.0;
  double M = 0.0;
  double C_p = 0.0;
  double C_1 = 0.0;
  double r_star = 0.0;  // stationary point of r/4 - C_p r^p
  double Y = 0.0;
  double log_epsilon0_sq = 0.0;  // uncapped, natural log
  double epsilon0_sq = 0.0;
  std::size_t gap_samples = 0;
  double gap_min = 0.0;  // min of r/4 - log(1 + 4 e^{C_1 + C_p r^p}) on [Y, 10Y]
};

/// Throws OutOfRange for p outside (0,1), InvalidArgument for M <= 1 and
/// NoValidY when no Y below 1e6 works.
NonDensityCertificate nondensity_certificate(double p, double M);

/// sqrt(e^{sup phi} / pi) * normP / d(z): bounds |P(z)| for holomorphic P
/// with weighted norm <= normP. Throws UnboundedWeight when sup phi has no
/// finite estimate, InvalidArgument when z is not interior.
double pointwise_eval_bound(const Domain& domain, const Weight& w, cplx z, double normP);

/// Enclosure of ||cos(z/2)|| for phi = |Im z| + |z|^p: the disc |z| < radius
/// by quadrature plus the certified tail outside it.
struct NormEnclosure {
  double radius = 0.0;
  double truncated_sq = 0.0;
  double err = 0.0;
  double tail = 0.0;
  double lower = 0.0;  // sqrt(truncated_sq - err)
  double upper = 0.0;  // sqrt(truncated_sq + err + tail)
};

NormEnclosure cos_half_norm_enclosure(double p, double radius, const QuadOptions& opts = {});

struct MoonEvalConstant {
  MoonTangency tangency;
  double sup_phi = 0.0;
  double c_prime = 0.0;  // sqrt(e^{sup phi} / pi) / C
};

/// Uniform constant with |(z - Q)^2 P(z)| <= C' ||P|| on the probe circle.
MoonEvalConstant moon_eval_constant(const Domain& moon, const Weight& w,
                                    std::optional<double> probe_radius = std::nullopt,
                                    std::size_t samples = 4096);

}  // namespace wbl
