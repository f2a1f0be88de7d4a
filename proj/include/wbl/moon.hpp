#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wbl/bergman.hpp"
#include "wbl/geometry.hpp"
#include "wbl/polynomial.hpp"
#include "wbl/quad.hpp"
#include "wbl/weights.hpp"

namespace wbl {

/// Straight branch cut {t * direction : t >= 0} for sqrt(z); arguments are
/// taken in (cut_angle, cut_angle + 2 pi).
class BranchSpec {
 public:
  /// Throws CutIntersectsDomain when the ray (or the origin) meets the
  /// domain. Without a direction, moons cut toward their tangency point and
  /// arc regions along the positive real axis.
  static BranchSpec make(const Domain& domain, std::optional<cplx> direction = std::nullopt);

  cplx direction() const { return direction_; }
  double cut_angle() const { return cut_angle_; }

 private:
  BranchSpec(cplx dir, double angle) : direction_(dir), cut_angle_(angle) {}
  cplx direction_;
  double cut_angle_;
};

cplx branch_sqrt(const BranchSpec& spec, cplx z);

/// P(w) = P1(w^2) + w * P2(w^2). P must be centred at 0.
std::pair<Polynomial, Polynomial> parity_split(const Polynomial& p);

struct TransformCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double discrepancy = 0.0;
  double err = 0.0;  // combined quadrature and rounding error
};

/// int |f|^2 e^{-phi} against 4 int |f(w^2) w|^2 e^{-phi(w^2)} over the
/// image, with the image integral pulled back node by node.
TransformCheck change_of_variables_check(const Target& f, const Domain& domain, const Weight& w,
                                         const BranchSpec& spec, const QuadOptions& opts = {});

/// ||1/sqrt(z) - R||^2 computed directly against int |1 - sqrt(z) R|^2 e^{-phi} / |z|.
TransformCheck inverse_sqrt_identity_check(const Polynomial& r, const Domain& domain, const Weight& w,
                                           const BranchSpec& spec, const QuadOptions& opts = {});

struct CriterionReport {
  ScanResult scan;     // 1/sqrt(z)
  ScanResult control;  // 1/(z - hole_point)
  cplx hole_point;
  std::string criterion;
};

/// Requires the origin inside the inner disc for moon domains
/// (InvalidParameters otherwise).
CriterionReport moon_density_criterion(const Domain& domain, const Weight& w, const BranchSpec& spec, int max_degree,
                                       const BergmanOptions& opts = {}, std::optional<cplx> hole_point = std::nullopt);

/// Union of the stage cells 1..k built from alphas[0..k-2].
Domain thin_moon_region(int k, std::span<const double> alphas);
/// The thin piece |z| < 1, |z - a| > 1 - a, |arg z| <= pi / 2^{k+1}.
Domain thin_moon_strip(int k, double alpha);

struct ThinMoonStage {
  int k = 1;
  std::vector<double> alphas;  // alpha_1 .. alpha_k
  Domain region;
  Domain strip;
};

/// Throws InvalidParameters unless k >= 1, alphas.size() == k and
/// 0 < alpha_k < ... < alpha_1 < 1/4.
ThinMoonStage thin_moon_stage(int k, std::vector<double> alphas);

struct StripSearch {
  int k = 1;
  int degree = 0;
  double alpha = 0.0;          // chosen alpha_k
  double region_distance_sq = 0.0;
  double region_budget = 0.0;  // 2^{-(k+1)}
  double strip_sup = 0.0;      // sup over the strip of |1/sqrt(z) - P|^2
  double strip_mass = 0.0;     // int over the strip of e^{-phi}
  double strip_bound = 0.0;
  bool region_met = false;
  bool strip_met = false;
  int iterations = 0;
  Polynomial poly;
};

/// Fits P on the stage-k region at the given degree, then shrinks alpha_k
/// until sup |1/sqrt(z) - P|^2 * int e^{-phi} over the strip is below
/// 2^{-(k+1)}. `previous` holds alpha_1 .. alpha_{k-1}.
StripSearch strip_budget_search(int k, std::span<const double> previous, const Weight& w, int degree,
                                const BergmanOptions& opts = {});

/// Sup of |1/sqrt(z) - P(z)|^2 sampled on the strip boundary.
double strip_sup(int k, double alpha, const Polynomial& p, std::size_t samples = 4000);

}  // namespace wbl
