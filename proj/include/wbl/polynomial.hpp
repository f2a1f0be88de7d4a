#pragma once

#include <complex>
#include <cmath>
#include <vector>

namespace wbl {

using cplx = std::complex<double>;

/// Polynomial in the scaled shifted variable u = (z - center) / scale.
/// Coefficients are stored in u; taylor_coefficient() converts back to
/// the (z - center)^k expansion.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(cplx center, double scale, std::vector<cplx> scaled_coeffs)
      : center_(center), scale_(scale), coeffs_(std::move(scaled_coeffs)) {}

  /// Build from Taylor coefficients of sum c_k (z - center)^k.
  static Polynomial from_taylor(cplx center, const std::vector<cplx>& taylor, double scale = 1.0) {
    std::vector<cplx> b(taylor.size());
    double sk = 1.0;
    for (std::size_t k = 0; k < taylor.size(); ++k) {
      b[k] = taylor[k] * sk;
      sk *= scale;
    }
    return {center, scale, std::move(b)};
  }

  cplx operator()(cplx z) const { return eval_scaled((z - center_) / scale_); }

  /// Horner in the scaled variable.
  cplx eval_scaled(cplx u) const {
    cplx acc{0.0, 0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + *it;
    return acc;
  }

  /// Largest k with a nonzero coefficient; -1 for the zero polynomial.
  int degree() const {
    for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 0; --k) {
      if (coeffs_[static_cast<std::size_t>(k)] != cplx{}) return k;
    }
    return -1;
  }

  cplx taylor_coefficient(std::size_t k) const {
    if (k >= coeffs_.size()) return {};
    return coeffs_[k] / std::pow(scale_, static_cast<double>(k));
  }

  std::vector<cplx> taylor_coefficients() const {
    std::vector<cplx> out(coeffs_.size());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) out[k] = taylor_coefficient(k);
    return out;
  }

  cplx center() const { return center_; }
  double scale() const { return scale_; }
  const std::vector<cplx>& scaled_coefficients() const { return coeffs_; }
  std::vector<cplx>& scaled_coefficients() { return coeffs_; }

 private:
  cplx center_{0.0, 0.0};
  double scale_ = 1.0;
  std::vector<cplx> coeffs_;
};

}  // namespace wbl
