#include "wbl/gauss.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>

#include "wbl/errors.hpp"

namespace wbl {

namespace {

// Golub-Welsch for Jacobi weight (1-x)^a (1+x)^b on [-1, 1], mapped to [0, 1].
Rule1D golub_welsch_jacobi(int n, double a, double b) {
  if (n < 1) throw InvalidArgument("quadrature order must be positive");
  if (!(a > -1.0) || !(b > -1.0)) throw InvalidArgument("Jacobi exponents must exceed -1");
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));
  const double ab = a + b;
  diag(0) = (b - a) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double t = 2.0 * k + ab;
    diag(k) = (b * b - a * a) / (t * (t + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double t = 2.0 * k + ab;
    const double beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (t * t * (t + 1.0) * (t - 1.0));
    sub(k - 1) = std::sqrt(beta);
  }
  const double mu0 =
      std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));

  Rule1D rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  if (n == 1) {
    rule.nodes[0] = 0.5 * (1.0 + diag(0));
    rule.weights[0] = mu0 / std::pow(2.0, ab + 1.0);
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  const double map = std::pow(2.0, ab + 1.0);
  for (int k = 0; k < n; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    rule.nodes[static_cast<std::size_t>(k)] = 0.5 * (1.0 + es.eigenvalues()(k));
    rule.weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0 / map;
  }
  return rule;
}

}  // namespace

const Rule1D& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule1D> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, golub_welsch_jacobi(n, 0.0, 0.0)).first;
  return it->second;
}

Rule1D gauss_jacobi_left(int n, double b) { return golub_welsch_jacobi(n, 0.0, b); }

}  // namespace wbl
