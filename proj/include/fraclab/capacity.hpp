#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

#include "fraclab/assembly.hpp"
#include "fraclab/grid.hpp"

namespace fraclab {

class Profile;

/// Minimum value of a constrained quadratic problem together with its minimizer.
struct CapacityResult {
  double value = 0.0;
  /// Nodal potential over all interior nodes, constraints embedded.
  Eigen::VectorXd potential;
  /// Max |(A potential)_i| over free nodes outside K.
  double residual = 0.0;
  /// Set when K covers every node of omega_free (nothing left to minimize over).
  bool covers_all = false;
};

/// Minimizes x^T A x over x = data on `k_nodes`, x = 0 off `omega_free`, free elsewhere.
/// Works on any dense symmetric positive definite matrix indexed like the interior nodes.
CapacityResult constrained_minimum(const Eigen::MatrixXd& a, const NodeSet& omega_free,
                                   const NodeSet& k_nodes, const Eigen::VectorXd& data);

/// Condenser capacity of K in the region spanned by `omega_free`.
CapacityResult condenser_capacity(const StiffnessOperator& a, const NodeSet& omega_free,
                                  const NodeMask& k_mask);

/// u-capacity: as condenser_capacity with the data u (over all interior nodes) on K.
CapacityResult u_capacity(const StiffnessOperator& a, const NodeSet& omega_free,
                          const NodeMask& k_mask, const Eigen::VectorXd& u);

struct ExtrapolationResult {
  std::vector<double> radii;
  std::vector<double> values;
  double last = 0.0;
  /// |values[n-2] - values[n-1]|.
  double cauchy_gap = 0.0;
  /// cauchy_gap / last (0 when last == 0).
  double relative_gap = 0.0;
};

/// u-capacity of K with data `profile` on boxes (-R, R), one per radius.
/// Each box gets 2*R*cells_per_unit cells (rounded to the nearest integer).
ExtrapolationResult whole_line_u_capacity(std::span<const Interval> k,
                                          const std::function<double(double)>& profile,
                                          std::span<const double> radii, int cells_per_unit,
                                          const FracParams& params);

ExtrapolationResult whole_line_u_capacity(std::span<const Interval> k, const Profile& profile,
                                          std::span<const double> radii, int cells_per_unit,
                                          const FracParams& params);

}  // namespace fraclab
