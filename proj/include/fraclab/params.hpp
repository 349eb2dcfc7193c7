#pragma once

namespace fraclab {

/// Gamma function. Throws DomainError at the poles (0, -1, -2, ...).
double gamma_fn(double x);

/// Dimension, order and the closed-form constants attached to (N, s).
struct FracParams {
  int n_dim = 1;
  double s = 0.0;
  /// Normalization C(N,s) of the Gagliardo scalar product.
  double c_ns = 0.0;
  /// Extension constant: extension energy = kappa_s * Gagliardo norm squared.
  double kappa_s = 0.0;
  /// Sharp constant of the Herbst inequality.
  double lambda_hardy = 0.0;
  /// Critical Sobolev exponent 2N/(N-2s).
  double two_star = 0.0;
};

/// Builds FracParams; requires 0 < s < min(1, n_dim/2) strictly.
FracParams make_params(int n_dim, double s);

}  // namespace fraclab
