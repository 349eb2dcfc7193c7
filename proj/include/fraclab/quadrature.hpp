#pragma once

#include <vector>

namespace fraclab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta, via Golub-Welsch.
QuadratureRule gauss_jacobi(int n, double alpha, double beta);

/// n-point Gauss-Legendre rule on [lo, hi].
QuadratureRule gauss_legendre(int n, double lo, double hi);

/// n-point rule on [lo, hi] for the weight (x - lo)^alpha: sum w_i f(x_i) ~ int (x-lo)^alpha f.
QuadratureRule gauss_left_power(int n, double lo, double hi, double alpha);

}  // namespace fraclab
