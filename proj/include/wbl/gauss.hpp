#pragma once

#include <vector>

namespace wbl {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre on [0, 1].
const Rule1D& gauss_legendre(int n);

/// Gauss-Jacobi on [0, 1] for the weight s^b, b > -1.
Rule1D gauss_jacobi_left(int n, double b);

}  // namespace wbl
