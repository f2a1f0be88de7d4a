#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace testutil {

using cplx = std::complex<double>;

// splitmix64; fixed seeds keep every property test reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  cplx in_box(double xmin, double xmax, double ymin, double ymax) {
    return {uniform(xmin, xmax), uniform(ymin, ymax)};
  }
  cplx in_disc(cplx c, double r) {
    const double rho = r * std::sqrt(uniform());
    return c + std::polar(rho, uniform(0.0, 2.0 * M_PI));
  }
  cplx gaussian_complex() {
    const double u1 = std::max(uniform(), 1e-300), u2 = uniform();
    const double rr = std::sqrt(-2.0 * std::log(u1));
    return std::polar(rr, 2.0 * M_PI * u2);
  }

 private:
  std::uint64_t s_;
};

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testutil
