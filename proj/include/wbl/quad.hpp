#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "wbl/geometry.hpp"
#include "wbl/target.hpp"
#include "wbl/weights.hpp"

namespace wbl {

struct QuadOptions {
  double tol = 1e-8;  // relative to the L1 size of each probe
  int rule_order = 8;
  std::size_t max_cells = 2'000'000;
  double max_panel_width = std::numbers::pi / 8.0;
  int max_radial_level = 10;
  bool parallel = true;
};

/// Real-valued functions driving refinement. Probes sharing a group are
/// normalized by the L1 size of their joint Euclidean norm.
struct ProbeSet {
  int count = 1;
  std::function<void(cplx, double*)> eval;
  std::vector<int> group;  // empty: each probe is its own group
};

/// Angular panel of the polar decomposition around one origin.
struct Panel {
  std::size_t origin = 0;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  int radial_level = 0;
  double err = 0.0;  // normalized error score
};

/// Node/weight rule on a domain. The emitted rule integrates
/// g dlambda as sum_i weights[i] * g(nodes[i]).
struct QuadratureGrid {
  std::vector<cplx> nodes;
  std::vector<double> weights;
  std::vector<cplx> origins;
  std::vector<SingularPoint> singular_points;
  std::vector<Panel> panels;
  double tol = 0.0;
  /// max over probes of (estimated absolute error) / (probe L1 size)
  double rel_error = 0.0;
  std::vector<double> probe_values;
  std::vector<double> probe_errors;
  std::vector<double> probe_scales;
  bool converged = false;

  std::size_t cells() const { return panels.size(); }
};

struct QuadResult {
  cplx value;
  double err = 0.0;
  bool converged = true;
  std::size_t cells = 0;
  std::size_t nodes = 0;
};

struct NormResult {
  double value = 0.0;  // integral over the domain
  double err = 0.0;    // quadrature error estimate
  /// Bound on the part outside a truncated plane, when one is available.
  std::optional<double> tail;
  std::size_t cells = 0;
};

/// Build an adaptive rule for the probes. Does not throw on
/// non-convergence; inspect `converged`.
QuadratureGrid build_grid(const Domain& domain, std::span<const SingularPoint> singular,
                          std::span<const Curve> kinks, const ProbeSet& probes, const QuadOptions& opts);

/// Singular points not near the closed domain are dropped; coincident ones
/// are merged with orders added.
std::vector<SingularPoint> relevant_singularities(const Domain& domain, std::span<const SingularPoint> pts);

/// Integral of g over the domain. Singular points listed without an order
/// are handled by dyadic rings with geometric tail extrapolation.
/// Throws ToleranceNotMet or NonIntegrableSingularity.
QuadResult integrate(const Domain& domain, const std::function<cplx(cplx)>& g,
                     std::span<const SingularPoint> singular, const QuadOptions& opts = {});
QuadResult integrate(const Domain& domain, const std::function<cplx(cplx)>& g,
                     const std::vector<cplx>& singular_points, double tol);

/// sum_i weights[i] * g(nodes[i]) in blocked order.
cplx apply_rule(const QuadratureGrid& grid, const std::function<cplx(cplx)>& g);
double apply_rule_real(const QuadratureGrid& grid, const std::function<double(cplx)>& g);

NormResult weighted_norm_sq(const Target& f, const Domain& domain, const Weight& w, const QuadOptions& opts = {});

QuadResult inner_product(const Target& f, const Target& g, const Domain& domain, const Weight& w,
                         const QuadOptions& opts = {});

/// amplitude * 2 pi * int_R^inf r exp(-r^p) dr for w = |Im z| + |z|^p.
/// Throws UnsupportedGrowth for growth > 1, InvalidArgument for other weights.
double truncation_tail(const Weight& w, double radius, double amplitude, double growth);

double domain_area(const Domain& domain, double tol = 1e-12);
/// Area-weighted centroid; exact for discs and truncated planes.
cplx domain_centroid(const Domain& domain, double tol = 1e-12);

}  // namespace wbl
