#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wbl/geometry.hpp"
#include "wbl/polynomial.hpp"
#include "wbl/quad.hpp"
#include "wbl/target.hpp"
#include "wbl/weights.hpp"

namespace wbl {

inline constexpr double kIllConditioned = 1e14;

struct BergmanOptions {
  QuadOptions quad;
  std::optional<cplx> center;   // default: domain centroid
  std::optional<double> scale;  // default: half the bounding-box diagonal
  /// Approximate f / divisor instead of f; see best_poly_approx.
  std::optional<Polynomial> divisor;
};

/// G[j][k] = <u^j, u^k> with u = (z - center) / scale.
struct GramMatrix {
  cplx center;
  double scale = 1.0;
  int degree = 0;
  Eigen::MatrixXcd g;
  double cond = 0.0;
  double quad_rel_error = 0.0;
  bool ill_conditioned = false;
  bool positive_definite = true;
};

struct ApproximationResult {
  int degree = 0;
  Polynomial poly;
  double distance = 0.0;
  /// d_j for j = history_start .. degree.
  std::vector<double> history;
  int history_start = 0;
  double err_budget = 0.0;
  std::vector<double> budget_history;
  std::vector<double> cond_history;
  double cond = 0.0;
  bool ill_conditioned = false;
  double target_norm = 0.0;  // discrete ||f||
  double quad_rel_error = 0.0;
  std::size_t nodes = 0;
};

enum class Verdict { Decaying, Plateau, Inconclusive };
std::string to_string(Verdict v);

struct ScanResult {
  std::vector<double> distances;  // d_0 .. d_N
  std::vector<double> budgets;
  std::vector<double> conds;
  Verdict verdict = Verdict::Inconclusive;
  cplx center;
  double scale = 1.0;
  double target_norm = 0.0;
  double quad_rel_error = 0.0;
  bool ill_conditioned = false;
};

struct ExtremalBasis {
  std::vector<Polynomial> basis;  // f_0 .. f_N
  std::vector<double> leading;    // a_n, coefficient of (z - center)^n in f_n
  GramMatrix gram;
};

/// Throws DegenerateWeight when some atom in the closed domain has mass >= 2.
GramMatrix gram_matrix(const Domain& domain, const Weight& w, int degree, const BergmanOptions& opts = {});

/// Best approximation of f by polynomials of degree <= n. With a divisor Q the
/// target becomes f / Q; pass the weight with log|Q|^2 already removed.
/// <(z - center)^j, (z - center)^k>, i.e. g rescaled by scale^{j+k}.
Eigen::MatrixXcd monomial_gram(const GramMatrix& gm);

ApproximationResult best_poly_approx(const Target& f, const Domain& domain, const Weight& w, int degree,
                                     const BergmanOptions& opts = {});

/// Same, with Taylor coefficients c_0..c_m at the centre fixed to `jet`.
ApproximationResult best_poly_approx_with_jet(const Target& f, const Domain& domain, const Weight& w, int degree,
                                              const std::vector<cplx>& jet, const BergmanOptions& opts = {});

ExtremalBasis extremal_basis(const Domain& domain, const Weight& w, int degree, const BergmanOptions& opts = {});

/// Heuristic verdict from a distance sequence; see README for the rule.
Verdict classify_scan(const std::vector<double>& d, double final_budget, double target_norm);

ScanResult density_scan(const Target& f, const Domain& domain, const Weight& w, int max_degree,
                        const BergmanOptions& opts = {});

/// Columns n, d_n, err_budget, cond_estimate.
void write_scan_csv(std::ostream& out, const ScanResult& scan);

/// Resolved defaults for a domain.
cplx default_center(const Domain& domain);
double default_scale(const Domain& domain);

/// Quadrature rule plus sqrt(w_i exp(-phi(z_i))) at every node, built for
/// polynomials up to `degree` (and f when given).
struct WeightedRule {
  QuadratureGrid grid;
  std::vector<double> sqrt_weight;
  cplx center;
  double scale = 1.0;
};

WeightedRule weighted_rule(const Domain& domain, const Weight& w, int degree, const Target* f,
                           const BergmanOptions& opts);

}  // namespace wbl
