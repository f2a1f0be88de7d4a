#pragma once

// Data-parallel inner loops. Every parallel kernel has a serial twin in
// kernels::reference performing the same arithmetic in the same order, so
// results are bit-identical for any thread count.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>

#include "wbl/weights.hpp"

namespace wbl {

/// Thread cap: WBL_THREADS if set, else the OpenMP default.
int max_threads();
void set_max_threads(int n);

namespace kernels {

inline constexpr std::size_t kSumBlock = 1024;

/// Runs fn(i) for i in [0, n) across threads; fn must only write slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

double blocked_sum(std::span<const double> v);
std::complex<double> blocked_sum(std::span<const std::complex<double>> v);

/// sum_i w_i * v_i with the blocked summation order.
double weighted_sum(std::span<const double> w, std::span<const double> v);
std::complex<double> weighted_sum(std::span<const double> w, std::span<const std::complex<double>> v);

/// out_i = sqrt(w_i * exp(-phi(z_i))).
void sqrt_weighted_density(const Weight& phi, std::span<const std::complex<double>> z,
                           std::span<const double> w, std::span<double> out);

/// A(i, k) = sw_i * u_i^k with u = (z - center) / scale, k = 0..ncols-1.
Eigen::MatrixXcd design_matrix(std::span<const std::complex<double>> z, std::span<const double> sw,
                               std::complex<double> center, double scale, int ncols);

/// A^H A, each entry a fixed-order dot product.
Eigen::MatrixXcd gram_from_design(const Eigen::MatrixXcd& a);

namespace reference {

double blocked_sum(std::span<const double> v);
std::complex<double> blocked_sum(std::span<const std::complex<double>> v);
double weighted_sum(std::span<const double> w, std::span<const double> v);
std::complex<double> weighted_sum(std::span<const double> w, std::span<const std::complex<double>> v);
void sqrt_weighted_density(const Weight& phi, std::span<const std::complex<double>> z,
                           std::span<const double> w, std::span<double> out);
Eigen::MatrixXcd design_matrix(std::span<const std::complex<double>> z, std::span<const double> sw,
                               std::complex<double> center, double scale, int ncols);
Eigen::MatrixXcd gram_from_design(const Eigen::MatrixXcd& a);

/// Naive left-to-right sum, for accuracy comparisons only.
double naive_sum(std::span<const double> v);

}  // namespace reference
}  // namespace kernels
}  // namespace wbl
