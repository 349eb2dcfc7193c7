#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fraclab/eigs.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/params.hpp"

namespace fraclab {

/// Shrinking-hole experiment: holes eps*K for every eps in a strictly decreasing list.
struct SweepConfig {
  double s = 0.25;
  /// 1-based eigenvalue index.
  int j = 1;
  std::vector<Interval> k{{-1.0, 1.0}};
  std::vector<double> eps;
  double x_min = -1.0;
  double x_max = 1.0;
  int n_cells = 1600;
  /// Eigenpairs computed per solve (at least j + 1).
  int eig_count = 4;
  /// Sweeps refuse to run when the relative gap around lambda_j falls below this.
  double min_relative_gap = 1e-3;
  /// Required eps_min / h.
  double resolution_factor = 8.0;
  EigOptions eig;
};

struct SweepRow {
  double eps = 0.0;
  double lambda0 = 0.0;
  double lambda_eps = 0.0;
  double shift = 0.0;
  double ucap = 0.0;
  double ratio = 0.0;
  double cap = 0.0;
  /// The first eig_count eigenvalues with the hole.
  std::vector<double> hole_values;
  /// Range of the condenser potential.
  double potential_min = 0.0;
  double potential_max = 0.0;
  int hole_nodes = 0;
};

struct SweepTable {
  SweepConfig config;
  FracParams params;
  /// First eig_count eigenvalues without hole, shared by every row.
  std::vector<double> base_values;
  /// Mass-normalized u_j over the interior nodes.
  Eigen::VectorXd u_j;
  std::vector<SweepRow> rows;
};

/// Validates the configuration, solves the unperturbed problem once and one row per eps.
SweepTable run_sweep(const SweepConfig& config);

struct RateFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double r_squared = 0.0;
  std::vector<double> window;

  double prefactor() const;
};

/// OLS fit of log(value) = log_prefactor + exponent * log(eps) over the points whose eps is
/// in `window` (empty: the three smallest eps). Needs >= 3 points, all values > 0.
RateFit fit_rate(std::span<const std::pair<double, double>> series,
                 std::span<const double> window = {});

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
  std::vector<double> sequence;
};

/// PASS iff |ratio - 1| <= tol at the smallest eps and |ratio - 1| is nonincreasing over
/// the last three rows.
Verdict verify_expansion(const SweepTable& table, double tol);

/// PASS iff ucap / eps^{N + 2(gamma - s)} at the smallest eps is within tol (relative) of
/// cap_ref; when K has positive measure cap_ref must also be strictly positive.
Verdict scaling_prefactor_check(const SweepTable& table, double gamma, double cap_ref, double tol);

/// Calibrates C = shift / sqrt(cap) on the first (largest eps) row and checks
/// shift <= C sqrt(cap) on every later row.
Verdict continuity_check(const SweepTable& table);

/// j-th Dirichlet eigenvalue of -u'' on the grid interval, P1 elements.
double classical_dirichlet_eigenvalue(const Grid& grid, int j);

/// Classical u-capacity of [a, b] in (x_min, x_max) for the data phi:
/// int_a^b phi'^2 + phi(a)^2 / (a - x_min) + phi(b)^2 / (x_max - b).
double classical_u_capacity(double x_min, double x_max, double a, double b,
                            const std::function<double(double)>& phi,
                            const std::function<double(double)>& dphi);

struct ComparisonRow {
  double eps = 0.0;
  double classical_ucap = 0.0;
  double predicted_shift = 0.0;
  double restricted_shift = 0.0;
};

struct ComparisonTable {
  double s = 0.0;
  int j = 1;
  double classical_lambda = 0.0;
  double classical_lambda_exact = 0.0;
  double nu = 0.0;
  /// s * lambda^{s-1} * lim_{eps->0} Cap([-eps, eps], phi_j).
  double predicted_limit = 0.0;
  std::vector<ComparisonRow> rows;
};

/// Spectral (power of the Dirichlet Laplacian) against restricted shifts for holes [-eps, eps].
ComparisonTable spectral_comparison(const Grid& grid, double s, int j,
                                    std::span<const double> eps_list);

}  // namespace fraclab
