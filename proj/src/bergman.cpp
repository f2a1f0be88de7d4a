#include "wbl/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "wbl/errors.hpp"
#include "wbl/kernels.hpp"

namespace wbl {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_weight(const Domain& domain, const Weight& w) {
  const auto atoms = singular_points(w);
  for (const auto& sp : relevant_singularities(domain, atoms)) {
    if (sp.order && *sp.order >= 2.0) {
      throw DegenerateWeight("an atom of mass >= 2 makes the constants non-integrable");
    }
  }
}

Eigen::VectorXcd weighted_target(const WeightedRule& rule, const Target& f, const std::optional<Polynomial>& divisor) {
  const auto& z = rule.grid.nodes;
  Eigen::VectorXcd b(static_cast<Eigen::Index>(z.size()));
  kernels::parallel_for(z.size(), [&](std::size_t i) {
    cplx v = f(z[i]);
    if (divisor) v /= (*divisor)(z[i]);
    b(static_cast<Eigen::Index>(i)) = rule.sqrt_weight[i] * v;
  });
  return b;
}

double squared_norm(const Eigen::VectorXcd& v, Eigen::Index from = 0) {
  std::vector<double> sq(static_cast<std::size_t>(v.size() - from));
  for (Eigen::Index i = from; i < v.size(); ++i) sq[static_cast<std::size_t>(i - from)] = std::norm(v(i));
  return kernels::blocked_sum(sq);
}

double cond_of_triangular(const Eigen::MatrixXcd& r) {
  if (r.rows() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  const double c = sv(0) / smin;
  return c * c;
}

// Least squares on the free columns; fills distances for degrees fixed..n.
ApproximationResult solve(const WeightedRule& rule, const Eigen::VectorXcd& b_full, int degree,
                          const std::vector<cplx>& fixed_scaled) {
  const int m = static_cast<int>(fixed_scaled.size()) - 1;  // last fixed degree, -1 when none
  const auto& z = rule.grid.nodes;
  const Eigen::MatrixXcd a = kernels::design_matrix(z, rule.sqrt_weight, rule.center, rule.scale, degree + 1);

  Eigen::VectorXcd b = b_full;
  for (int k = 0; k <= m; ++k) b -= a.col(k) * fixed_scaled[static_cast<std::size_t>(k)];

  ApproximationResult res;
  res.degree = degree;
  res.nodes = z.size();
  res.quad_rel_error = rule.grid.rel_error;
  res.target_norm = std::sqrt(squared_norm(b_full));

  const int nfree = degree - m;
  std::vector<cplx> scaled(static_cast<std::size_t>(degree + 1), cplx{});
  for (int k = 0; k <= m; ++k) scaled[static_cast<std::size_t>(k)] = fixed_scaled[static_cast<std::size_t>(k)];

  const int start = std::max(m, 0);
  res.history_start = start;
  if (nfree <= 0) {
    res.history = {std::sqrt(squared_norm(b))};
    res.cond_history = {1.0};
  } else {
    const Eigen::MatrixXcd free = a.rightCols(nfree);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(free);
    const Eigen::VectorXcd qtb = qr.householderQ().adjoint() * b;
    const Eigen::MatrixXcd r = qr.matrixQR().topLeftCorner(nfree, nfree).triangularView<Eigen::Upper>();
    const double tail = squared_norm(qtb, nfree);

    // d_j^2 = tail + sum_{free k beyond degree j} |c_k|^2
    std::vector<double> d2(static_cast<std::size_t>(degree - start + 1), tail);
    for (int j = degree - 1; j >= start; --j) {
      const int k = j - m;  // free index of degree j + 1
      d2[static_cast<std::size_t>(j - start)] = d2[static_cast<std::size_t>(j - start + 1)] + std::norm(qtb(k));
    }
    for (double v : d2) res.history.push_back(std::sqrt(v));
    for (int j = start; j <= degree; ++j) {
      const int used = j - m;
      res.cond_history.push_back(used > 0 ? cond_of_triangular(r.topLeftCorner(used, used)) : 1.0);
    }
    const Eigen::VectorXcd x = r.triangularView<Eigen::Upper>().solve(qtb.head(nfree));
    for (int k = 0; k < nfree; ++k) scaled[static_cast<std::size_t>(m + 1 + k)] = x(k);
  }
  res.poly = Polynomial(rule.center, rule.scale, scaled);
  res.distance = res.history.back();
  res.cond = res.cond_history.back();
  res.ill_conditioned = res.cond > kIllConditioned;
  for (double d : res.history) res.budget_history.push_back(res.quad_rel_error * d + 64.0 * kEps * res.target_norm);
  res.err_budget = res.budget_history.back();
  return res;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Decaying:
      return "decaying";
    case Verdict::Plateau:
      return "plateau";
    default:
      return "inconclusive";
  }
}

cplx default_center(const Domain& domain) { return domain_centroid(domain); }

double default_scale(const Domain& domain) { return 0.5 * domain.bounding_box().diagonal(); }

WeightedRule weighted_rule(const Domain& domain, const Weight& w, int degree, const Target* f,
                           const BergmanOptions& opts) {
  if (degree < 0) throw InvalidArgument("degree must be non-negative");
  check_weight(domain, w);
  WeightedRule rule;
  rule.center = opts.center.value_or(default_center(domain));
  rule.scale = opts.scale.value_or(default_scale(domain));
  if (!(rule.scale > 0.0)) throw InvalidArgument("scale must be positive");

  std::vector<SingularPoint> sing = singular_points(w);
  if (f != nullptr) sing.insert(sing.end(), f->singularities.begin(), f->singularities.end());
  const auto kinks = kink_curves(w);

  const cplx p = rule.center;
  const double s = rule.scale;
  const std::optional<Polynomial>& divisor = opts.divisor;
  ProbeSet probes;
  probes.count = f != nullptr ? 4 : 3;
  probes.eval = [&](cplx z, double* out) {
    const double e = density(w, z);
    const cplx u = (z - p) / s;
    cplx un{1.0, 0.0};
    for (int k = 0; k < degree; ++k) un *= u;
    out[0] = e;
    out[1] = e * std::norm(un);
    out[2] = e * un.real() * un.real();
    if (f != nullptr) {
      cplx v = (*f)(z);
      if (divisor) v /= (*divisor)(z);
      out[3] = e * std::norm(v);
    }
  };
  rule.grid = build_grid(domain, sing, kinks, probes, opts.quad);
  if (!rule.grid.converged) {
    throw ToleranceNotMet("quadrature for the weighted rule did not converge", rule.grid.probe_values[0],
                          rule.grid.probe_errors[0]);
  }
  rule.sqrt_weight.resize(rule.grid.nodes.size());
  kernels::sqrt_weighted_density(w, rule.grid.nodes, rule.grid.weights, rule.sqrt_weight);
  return rule;
}

GramMatrix gram_matrix(const Domain& domain, const Weight& w, int degree, const BergmanOptions& opts) {
  const WeightedRule rule = weighted_rule(domain, w, degree, nullptr, opts);
  const Eigen::MatrixXcd a = kernels::design_matrix(rule.grid.nodes, rule.sqrt_weight, rule.center, rule.scale,
                                                    degree + 1);
  GramMatrix gm;
  gm.center = rule.center;
  gm.scale = rule.scale;
  gm.degree = degree;
  gm.g = kernels::gram_from_design(a);
  gm.quad_rel_error = rule.grid.rel_error;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  const Eigen::MatrixXcd r = qr.matrixQR().topLeftCorner(degree + 1, degree + 1).triangularView<Eigen::Upper>();
  gm.cond = cond_of_triangular(r);
  gm.ill_conditioned = gm.cond > kIllConditioned;
  Eigen::LLT<Eigen::MatrixXcd> llt(gm.g);
  gm.positive_definite = llt.info() == Eigen::Success;
  return gm;
}

Eigen::MatrixXcd monomial_gram(const GramMatrix& gm) {
  const Eigen::Index n = gm.g.rows();
  Eigen::VectorXd sp(n);
  for (Eigen::Index j = 0; j < n; ++j) sp(j) = std::pow(gm.scale, static_cast<double>(j));
  return sp.asDiagonal() * gm.g * sp.asDiagonal();
}

ApproximationResult best_poly_approx(const Target& f, const Domain& domain, const Weight& w, int degree,
                                     const BergmanOptions& opts) {
  const WeightedRule rule = weighted_rule(domain, w, degree, &f, opts);
  return solve(rule, weighted_target(rule, f, opts.divisor), degree, {});
}

ApproximationResult best_poly_approx_with_jet(const Target& f, const Domain& domain, const Weight& w, int degree,
                                              const std::vector<cplx>& jet, const BergmanOptions& opts) {
  if (jet.empty()) return best_poly_approx(f, domain, w, degree, opts);
  if (static_cast<int>(jet.size()) > degree + 1) throw InvalidArgument("jet order exceeds the degree");
  const WeightedRule rule = weighted_rule(domain, w, degree, &f, opts);
  std::vector<cplx> fixed(jet.size());
  double sk = 1.0;
  for (std::size_t k = 0; k < jet.size(); ++k) {
    fixed[k] = jet[k] * sk;
    sk *= rule.scale;
  }
  return solve(rule, weighted_target(rule, f, opts.divisor), degree, fixed);
}

ExtremalBasis extremal_basis(const Domain& domain, const Weight& w, int degree, const BergmanOptions& opts) {
  const WeightedRule rule = weighted_rule(domain, w, degree, nullptr, opts);
  const int n = degree + 1;
  const Eigen::MatrixXcd a = kernels::design_matrix(rule.grid.nodes, rule.sqrt_weight, rule.center, rule.scale, n);

  ExtremalBasis out;
  out.gram.center = rule.center;
  out.gram.scale = rule.scale;
  out.gram.degree = degree;
  out.gram.g = kernels::gram_from_design(a);
  out.gram.quad_rel_error = rule.grid.rel_error;

  // Orthogonalize u^N, u^{N-1}, ..., 1 so column j spans {u^k : k >= N - j}.
  const Eigen::MatrixXcd rev = a.rowwise().reverse();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(rev);
  Eigen::MatrixXcd r = qr.matrixQR().topLeftCorner(n, n).triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) == 0.0) throw DegenerateWeight("monomials are linearly dependent on the quadrature rule");
    r.row(j) *= std::conj(d) / std::abs(d);
  }
  out.gram.cond = cond_of_triangular(r);
  out.gram.ill_conditioned = out.gram.cond > kIllConditioned;
  Eigen::LLT<Eigen::MatrixXcd> llt(out.gram.g);
  out.gram.positive_definite = llt.info() == Eigen::Success;

  for (int deg = 0; deg <= degree; ++deg) {
    const int j = degree - deg;
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(j + 1);
    e(j) = 1.0;
    const Eigen::VectorXcd y = r.topLeftCorner(j + 1, j + 1).triangularView<Eigen::Upper>().solve(e);
    std::vector<cplx> coeffs(static_cast<std::size_t>(n), cplx{});
    for (int i = 0; i <= j; ++i) coeffs[static_cast<std::size_t>(degree - i)] = y(i);
    out.basis.emplace_back(rule.center, rule.scale, std::move(coeffs));
    out.leading.push_back(1.0 / r(j, j).real() / std::pow(rule.scale, deg));
  }
  return out;
}

Verdict classify_scan(const std::vector<double>& d, double final_budget, double target_norm) {
  if (d.empty()) return Verdict::Inconclusive;
  const std::size_t n = d.size() - 1;
  const double last = d.back();
  if (last <= std::max(final_budget, 1e-10 * target_norm)) return Verdict::Decaying;
  if (n == 0) return Verdict::Inconclusive;
  const std::size_t q0 = std::min(n - 1, (3 * n) / 4);
  const double head = d[q0];
  const double slope = (std::log(last) - std::log(head)) / static_cast<double>(n - q0);
  if (last < 0.05 * d.front() && slope < -0.05) return Verdict::Decaying;
  const double change = head > 0.0 ? (head - last) / head : 0.0;
  if (change < 0.01 && last > 0.2 * d.front()) return Verdict::Plateau;

  // Decrements delta_m ~ C m^{-gamma}; with gamma > 1 the remaining tail sums
  // to about delta_n * n / (gamma - 1).
  const std::size_t ma = q0 + 1;
  if (n >= ma + 2) {
    const double da = d[ma - 1] - d[ma];
    const double db = d[n - 1] - d[n];
    if (da > 0.0 && db > 0.0 && db < da) {
      const double gamma = std::log(da / db) / std::log(static_cast<double>(n) / static_cast<double>(ma));
      if (gamma > 1.0) {
        const double limit = last - db * static_cast<double>(n) / (gamma - 1.0);
        if (limit > 0.5 * last && limit > 0.2 * d.front()) return Verdict::Plateau;
      }
    }
  }
  return Verdict::Inconclusive;
}

ScanResult density_scan(const Target& f, const Domain& domain, const Weight& w, int max_degree,
                        const BergmanOptions& opts) {
  const ApproximationResult r = best_poly_approx(f, domain, w, max_degree, opts);
  ScanResult s;
  s.distances = r.history;
  s.budgets = r.budget_history;
  s.conds = r.cond_history;
  s.center = r.poly.center();
  s.scale = r.poly.scale();
  s.target_norm = r.target_norm;
  s.quad_rel_error = r.quad_rel_error;
  s.ill_conditioned = r.ill_conditioned;
  s.verdict = classify_scan(s.distances, s.budgets.back(), s.target_norm);
  return s;
}

void write_scan_csv(std::ostream& out, const ScanResult& scan) {
  const auto old = out.precision(17);
  out << "n,d_n,err_budget,cond_estimate\n";
  for (std::size_t n = 0; n < scan.distances.size(); ++n) {
    out << n << ',' << scan.distances[n] << ',' << scan.budgets[n] << ',' << scan.conds[n] << '\n';
  }
  out.precision(old);
}

}  // namespace wbl
