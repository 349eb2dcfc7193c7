#pragma once

#include <Eigen/Dense>

#include "fraclab/assembly.hpp"
#include "fraclab/grid.hpp"

namespace fraclab {

struct EigOptions {
  /// Bound on the relative residual ||Ax - lambda Mx|| / ((||A|| + |lambda| ||M||) ||x||).
  double tolerance = 1e-10;
};

/// Lowest generalized eigenpairs A x = lambda M x.
///
/// values ascend; vectors are M-orthonormal and sign-fixed so that the entry of largest
/// magnitude is positive (ties: lowest index).
struct EigenPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd residuals;
  double tolerance = 0.0;

  int count() const { return static_cast<int>(values.size()); }
};

/// Dense symmetric-definite solve by Cholesky reduction of `m`. Throws NumericalError when
/// `m` is not positive definite or a residual exceeds the tolerance.
EigenPairs solve_generalized(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m, int count,
                             const EigOptions& options = {});

/// Lowest `count` eigenpairs of the discrete restricted fractional Laplacian on the nodes
/// `free`; every other interior node is held at zero. Vectors are returned over all
/// interior nodes (zeros off `free`).
EigenPairs solve_eigs(const StiffnessOperator& a, const MassOperator& m, const NodeSet& free,
                      int count, const EigOptions& options = {});

/// (x^T A x) / (x^T M x). Throws DomainError when x^T M x <= 0.
double rayleigh(const StiffnessOperator& a, const MassOperator& m, const Eigen::VectorXd& x);

/// Flips the sign of each column so that its largest-magnitude entry is positive.
void fix_signs(Eigen::MatrixXd& vectors);

}  // namespace fraclab
