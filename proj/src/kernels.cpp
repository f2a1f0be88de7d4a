#include "wbl/kernels.hpp"

#include <atomic>
#include <exception>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wbl {

namespace {

std::atomic<int> g_threads{0};

int env_threads() {
  const char* env = std::getenv("WBL_THREADS");
  if (env == nullptr) return 0;
  try {
    const int n = std::stoi(env);
    return n > 0 ? n : 0;
  } catch (...) {
    return 0;
  }
}

int default_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <class T, class F>
T blocked_reduce_parallel(std::size_t n, F term) {
  const std::size_t nblocks = (n + kernels::kSumBlock - 1) / kernels::kSumBlock;
  std::vector<T> partial(nblocks, T{});
  const long long nb = static_cast<long long>(nblocks);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (long long b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kernels::kSumBlock;
    const std::size_t hi = std::min(n, lo + kernels::kSumBlock);
    T acc{};
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  T total{};
  for (const T& p : partial) total += p;
  return total;
}

template <class T, class F>
T blocked_reduce_serial(std::size_t n, F term) {
  T total{};
  for (std::size_t lo = 0; lo < n; lo += kernels::kSumBlock) {
    const std::size_t hi = std::min(n, lo + kernels::kSumBlock);
    T acc{};
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    total += acc;
  }
  return total;
}

inline void fill_design_row(Eigen::MatrixXcd& a, Eigen::Index i, std::complex<double> u, double sw, int ncols) {
  std::complex<double> pw(sw, 0.0);
  for (int k = 0; k < ncols; ++k) {
    a(i, k) = pw;
    pw *= u;
  }
}

inline std::complex<double> column_dot(const Eigen::MatrixXcd& a, Eigen::Index j, Eigen::Index k) {
  std::complex<double> acc{};
  const auto* cj = a.col(j).data();
  const auto* ck = a.col(k).data();
  for (Eigen::Index i = 0; i < a.rows(); ++i) acc += std::conj(cj[i]) * ck[i];
  return acc;
}

}  // namespace

int max_threads() {
  const int forced = g_threads.load();
  if (forced > 0) return forced;
  const int env = env_threads();
  return env > 0 ? std::min(env, default_threads()) : default_threads();
}

void set_max_threads(int n) { g_threads.store(n > 0 ? n : 0); }

namespace kernels {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const long long nn = static_cast<long long>(n);
  // The exception of the lowest failing index wins, whatever the schedule.
  std::exception_ptr failure;
  long long failed_at = nn;
#pragma omp parallel for schedule(dynamic, 1) num_threads(max_threads())
  for (long long i = 0; i < nn; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(wbl_parallel_for_error)
      {
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double blocked_sum(std::span<const double> v) {
  return blocked_reduce_parallel<double>(v.size(), [&](std::size_t i) { return v[i]; });
}

std::complex<double> blocked_sum(std::span<const std::complex<double>> v) {
  return blocked_reduce_parallel<std::complex<double>>(v.size(), [&](std::size_t i) { return v[i]; });
}

double weighted_sum(std::span<const double> w, std::span<const double> v) {
  return blocked_reduce_parallel<double>(w.size(), [&](std::size_t i) { return w[i] * v[i]; });
}

std::complex<double> weighted_sum(std::span<const double> w, std::span<const std::complex<double>> v) {
  return blocked_reduce_parallel<std::complex<double>>(w.size(), [&](std::size_t i) { return w[i] * v[i]; });
}

void sqrt_weighted_density(const Weight& phi, std::span<const std::complex<double>> z,
                           std::span<const double> w, std::span<double> out) {
  const long long n = static_cast<long long>(z.size());
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (long long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = std::sqrt(w[k] * density(phi, z[k]));
  }
}

Eigen::MatrixXcd design_matrix(std::span<const std::complex<double>> z, std::span<const double> sw,
                               std::complex<double> center, double scale, int ncols) {
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(z.size()), ncols);
  const long long n = static_cast<long long>(z.size());
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (long long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    fill_design_row(a, static_cast<Eigen::Index>(i), (z[k] - center) / scale, sw[k], ncols);
  }
  return a;
}

Eigen::MatrixXcd gram_from_design(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.cols();
  Eigen::MatrixXcd g(n, n);
  const long long pairs = static_cast<long long>(n * (n + 1) / 2);
#pragma omp parallel for schedule(dynamic, 1) num_threads(max_threads())
  for (long long t = 0; t < pairs; ++t) {
    // Unrank t into (j, k) with j <= k.
    Eigen::Index j = 0, rem = static_cast<Eigen::Index>(t);
    while (rem >= n - j) {
      rem -= n - j;
      ++j;
    }
    const Eigen::Index k = j + rem;
    const auto v = column_dot(a, j, k);
    g(j, k) = v;
    g(k, j) = std::conj(v);
  }
  for (Eigen::Index j = 0; j < n; ++j) g(j, j) = g(j, j).real();
  return g;
}

namespace reference {

double blocked_sum(std::span<const double> v) {
  return blocked_reduce_serial<double>(v.size(), [&](std::size_t i) { return v[i]; });
}

std::complex<double> blocked_sum(std::span<const std::complex<double>> v) {
  return blocked_reduce_serial<std::complex<double>>(v.size(), [&](std::size_t i) { return v[i]; });
}

double weighted_sum(std::span<const double> w, std::span<const double> v) {
  return blocked_reduce_serial<double>(w.size(), [&](std::size_t i) { return w[i] * v[i]; });
}

std::complex<double> weighted_sum(std::span<const double> w, std::span<const std::complex<double>> v) {
  return blocked_reduce_serial<std::complex<double>>(w.size(), [&](std::size_t i) { return w[i] * v[i]; });
}

void sqrt_weighted_density(const Weight& phi, std::span<const std::complex<double>> z,
                           std::span<const double> w, std::span<double> out) {
  for (std::size_t k = 0; k < z.size(); ++k) out[k] = std::sqrt(w[k] * density(phi, z[k]));
}

Eigen::MatrixXcd design_matrix(std::span<const std::complex<double>> z, std::span<const double> sw,
                               std::complex<double> center, double scale, int ncols) {
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(z.size()), ncols);
  for (std::size_t k = 0; k < z.size(); ++k) {
    fill_design_row(a, static_cast<Eigen::Index>(k), (z[k] - center) / scale, sw[k], ncols);
  }
  return a;
}

Eigen::MatrixXcd gram_from_design(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.cols();
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j; k < n; ++k) {
      const auto v = column_dot(a, j, k);
      g(j, k) = v;
      g(k, j) = std::conj(v);
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) g(j, j) = g(j, j).real();
  return g;
}

double naive_sum(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc;
}

}  // namespace reference
}  // namespace kernels
}  // namespace wbl
