#include "fraclab/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "fraclab/errors.hpp"
#include "fraclab/params.hpp"

namespace fraclab {

QuadratureRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw DomainError("gauss_jacobi: need at least one node");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("gauss_jacobi: alpha, beta > -1");

  // Recurrence coefficients of the monic Jacobi polynomials.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double two_k_ab = 2.0 * k + ab;
    if (k == 0) {
      diag(k) = (beta - alpha) / (ab + 2.0);
    } else {
      diag(k) = (beta * beta - alpha * alpha) / (two_k_ab * (two_k_ab + 2.0));
    }
    if (k >= 1) {
      double b;
      if (k == 1) {
        b = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
      } else {
        b = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
            (two_k_ab * two_k_ab * (two_k_ab + 1.0) * (two_k_ab - 1.0));
      }
      sub(k - 1) = std::sqrt(b);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const double mu0 = std::pow(2.0, ab + 1.0) * gamma_fn(alpha + 1.0) * gamma_fn(beta + 1.0) /
                     gamma_fn(ab + 2.0);
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

namespace {

QuadratureRule mapped(const QuadratureRule& ref, double lo, double hi, double scale) {
  QuadratureRule rule = ref;
  const double half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = lo + half * (ref.nodes[i] + 1.0);
    rule.weights[i] = ref.weights[i] * scale;
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  return mapped(gauss_jacobi(n, 0.0, 0.0), lo, hi, 0.5 * (hi - lo));
}

QuadratureRule gauss_left_power(int n, double lo, double hi, double alpha) {
  // (x - lo) = half (1 + xi), so (x - lo)^alpha dx = half^{alpha+1} (1+xi)^alpha dxi.
  const double half = 0.5 * (hi - lo);
  return mapped(gauss_jacobi(n, 0.0, alpha), lo, hi, std::pow(half, alpha + 1.0));
}

}  // namespace fraclab
