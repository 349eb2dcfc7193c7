#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/params.hpp"

namespace fraclab {

/// Gagliardo scalar product (phi_0, phi_k) of two hat functions of half-width h whose
/// centres are k*h apart, C(N,s)/2 factor included. Whole-line value: the hats extend by zero.
///
/// Closed form: C_s * h^{1-2s} * delta^4 |k|^{3-2s}, where delta^4 is the fourth centred
/// difference and C_s = Gamma(2s-3) cos(pi(2s-3)/2) / pi. See docs/toeplitz_generator.md.
/// For k >= 8 the difference is evaluated through its binomial series to avoid cancellation.
double toeplitz_entry(std::size_t k, double h, const FracParams& params);

/// Prefactor C_s of the closed form above.
double toeplitz_constant(double s);

/// Dense stiffness matrix over the interior nodes of a grid, entry(i,j) = g(|i-j|).
class StiffnessOperator {
 public:
  StiffnessOperator(const Grid& grid, const FracParams& params);

  const Grid& grid() const { return grid_; }
  const FracParams& params() const { return params_; }
  /// g(0..n_cells).
  const std::vector<double>& generator() const { return generator_; }
  int size() const { return grid_.interior_count(); }
  double entry(int i, int j) const;
  const Eigen::MatrixXd& dense() const { return dense_; }

  Eigen::MatrixXd restrict_to(const NodeSet& rows, const NodeSet& cols) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// x^T A x.
  double form(const Eigen::VectorXd& x) const;

 private:
  Grid grid_;
  FracParams params_;
  std::vector<double> generator_;
  Eigen::MatrixXd dense_;
};

StiffnessOperator assemble_stiffness(const Grid& grid, const FracParams& params);

/// Symmetric tridiagonal operator over the interior nodes.
class TridiagonalForm {
 public:
  TridiagonalForm(Eigen::VectorXd diag, Eigen::VectorXd off);

  int size() const { return static_cast<int>(diag_.size()); }
  const Eigen::VectorXd& diag() const { return diag_; }
  /// off(i) couples nodes i and i+1.
  const Eigen::VectorXd& off() const { return off_; }
  double entry(int i, int j) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  double form(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const;
  Eigen::MatrixXd restrict_to(const NodeSet& rows, const NodeSet& cols) const;

 private:
  Eigen::VectorXd diag_;
  Eigen::VectorXd off_;
};

/// Consistent P1 mass matrix: interior rows (h/6)[1, 4, 1].
class MassOperator : public TridiagonalForm {
 public:
  explicit MassOperator(const Grid& grid);
  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
};

MassOperator assemble_mass(const Grid& grid);

/// Exact P1 realization of the integral of u(x)^2 |x|^{-2s}.
class HardyForm : public TridiagonalForm {
 public:
  HardyForm(const Grid& grid, double s);
  const Grid& grid() const { return grid_; }
  double s() const { return s_; }

 private:
  Grid grid_;
  double s_;
};

HardyForm assemble_hardy_form(const Grid& grid, double s);

/// Integral of x^m |x|^{-2s} over [a, b], m in {0, 1, 2}; requires 2s < 1 when 0 is in [a, b].
double weighted_moment(double a, double b, int m, double s);

}  // namespace fraclab
