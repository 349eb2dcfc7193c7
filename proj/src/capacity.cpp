#include "fraclab/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fraclab/angular.hpp"
#include "fraclab/errors.hpp"

namespace fraclab {

CapacityResult constrained_minimum(const Eigen::MatrixXd& a, const NodeSet& omega_free,
                                   const NodeSet& k_nodes, const Eigen::VectorXd& data) {
  const Eigen::Index n = a.rows();
  if (data.size() != n) throw DomainError("capacity: data length must match the operator");
  if (!std::includes(omega_free.begin(), omega_free.end(), k_nodes.begin(), k_nodes.end())) {
    throw DomainError("capacity: K nodes must be contained in omega_free");
  }

  CapacityResult out;
  out.potential = Eigen::VectorXd::Zero(n);
  for (int p : k_nodes) out.potential(p) = data(p);
  if (k_nodes.empty()) return out;

  const NodeSet free = set_difference(omega_free, k_nodes);
  const auto nf = static_cast<Eigen::Index>(free.size());
  const auto nk = static_cast<Eigen::Index>(k_nodes.size());
  out.covers_all = free.empty();

  if (!free.empty()) {
    Eigen::MatrixXd a_ff(nf, nf);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
    for (Eigen::Index c = 0; c < nf; ++c) {
      for (Eigen::Index r = 0; r < nf; ++r) a_ff(r, c) = a(free[r], free[c]);
    }
    for (Eigen::Index c = 0; c < nk; ++c) {
      const double dk = data(k_nodes[c]);
      if (dk == 0.0) continue;
      for (Eigen::Index r = 0; r < nf; ++r) rhs(r) -= a(free[r], k_nodes[c]) * dk;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(a_ff);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("capacity: Cholesky factorization of the free block failed");
    }
    const Eigen::VectorXd x_f = llt.solve(rhs);
    for (Eigen::Index r = 0; r < nf; ++r) out.potential(free[r]) = x_f(r);
  }

  const Eigen::VectorXd ax = a * out.potential;
  out.value = out.potential.dot(ax);
  for (int p : free) out.residual = std::max(out.residual, std::abs(ax(p)));
  return out;
}

CapacityResult condenser_capacity(const StiffnessOperator& a, const NodeSet& omega_free,
                                  const NodeMask& k_mask) {
  return constrained_minimum(a.dense(), omega_free, k_mask.indices,
                             Eigen::VectorXd::Ones(a.size()));
}

CapacityResult u_capacity(const StiffnessOperator& a, const NodeSet& omega_free,
                          const NodeMask& k_mask, const Eigen::VectorXd& u) {
  return constrained_minimum(a.dense(), omega_free, k_mask.indices, u);
}

ExtrapolationResult whole_line_u_capacity(std::span<const Interval> k,
                                          const std::function<double(double)>& profile,
                                          std::span<const double> radii, int cells_per_unit,
                                          const FracParams& params) {
  if (radii.empty()) throw DomainError("whole_line_u_capacity: empty radius list");
  if (cells_per_unit < 1) throw DomainError("whole_line_u_capacity: cells_per_unit must be >= 1");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) {
      throw DomainError("whole_line_u_capacity: radii must be strictly increasing");
    }
  }

  ExtrapolationResult out;
  for (double r : radii) {
    const int n_cells = static_cast<int>(std::lround(2.0 * r * cells_per_unit));
    const Grid grid(-r, r, n_cells);
    const NodeMask mask = nodes_in_set(grid, k);
    Eigen::VectorXd data = Eigen::VectorXd::Zero(grid.interior_count());
    for (int p : mask.indices) {
      data(p) = profile(grid.interior_node(p));
      if (!std::isfinite(data(p))) {
        throw DomainError("whole_line_u_capacity: profile is not finite on a K node");
      }
    }
    const StiffnessOperator a(grid, params);
    out.radii.push_back(r);
    out.values.push_back(u_capacity(a, grid.all_interior(), mask, data).value);
  }

  for (std::size_t i = 1; i < out.values.size(); ++i) {
    const double prev = out.values[i - 1];
    if (out.values[i] > prev + 1e-10 * std::max(1.0, std::abs(prev))) {
      std::ostringstream msg;
      msg << "whole_line_u_capacity: sequence increases from R=" << out.radii[i - 1] << " to R="
          << out.radii[i] << " (" << prev << " -> " << out.values[i] << ")";
      throw NumericalError(msg.str());
    }
  }
  out.last = out.values.back();
  if (out.values.size() >= 2) {
    out.cauchy_gap = std::abs(out.values[out.values.size() - 2] - out.last);
    out.relative_gap = out.last != 0.0 ? out.cauchy_gap / std::abs(out.last) : 0.0;
  }
  return out;
}

ExtrapolationResult whole_line_u_capacity(std::span<const Interval> k, const Profile& profile,
                                          std::span<const double> radii, int cells_per_unit,
                                          const FracParams& params) {
  return whole_line_u_capacity(
      k, [&profile](double x) { return profile(x); }, radii, cells_per_unit, params);
}

}  // namespace fraclab
