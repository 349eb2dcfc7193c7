#pragma once

#include <Eigen/Dense>

#include <vector>

#include "fraclab/grid.hpp"

namespace fraclab {

/// Spectrum of the weighted eigenproblem on the half-sphere
///   -div(theta_{N+1}^{1-2s} grad psi) = mu theta_{N+1}^{1-2s} psi,  weighted Neumann at the equator.
///
/// N = 1: the half-circle is parametrized by phi in (-pi/2, pi/2), weight cos^{1-2s} phi, and
/// the two equator points are phi = -pi/2 (trace on x < 0) and phi = +pi/2 (trace on x > 0).
/// N >= 2 (experimental): only axisymmetric modes psi(theta) are computed, theta in (0, pi/2)
/// measured from the t-axis, weight sin^{N-1} theta cos^{1-2s} theta. mu_2 of the full problem
/// may belong to a non-axisymmetric harmonic and is then missed by this reduction.
struct AngularSpectrum {
  int n_dim = 1;
  double s = 0.0;
  Eigen::VectorXd mu;
  /// Nodal eigenvectors, normalized in the weighted L^2 mass.
  Eigen::MatrixXd vectors;
  /// Mesh nodes (angles).
  Eigen::VectorXd nodes;
  /// psi at the equator point bounding x < 0 (N = 1) or at the equator (N >= 2).
  std::vector<double> trace_minus;
  /// psi at the equator point bounding x > 0 (N = 1) or at the equator (N >= 2).
  std::vector<double> trace_plus;
};

/// Weighted P1 finite elements; the equator degeneracy is integrated with Gauss-Jacobi rules.
/// Requires 0 < s < 1, n_cells >= 4 and 1 <= count <= n_cells + 1.
AngularSpectrum solve_angular(int n_dim, double s, int n_cells, int count);

/// gamma = -(N-2s)/2 + sqrt(((N-2s)/2)^2 + mu). Throws DomainError for mu < 0.
double gamma_exponent(int n_dim, double s, double mu);

/// Homogeneous trace profile x -> |x|^gamma * (x > 0 ? psi_plus : psi_minus).
class Profile {
 public:
  Profile(double gamma, double psi_plus, double psi_minus);

  double gamma() const { return gamma_; }
  double psi_plus() const { return psi_plus_; }
  double psi_minus() const { return psi_minus_; }
  double operator()(double x) const;

 private:
  double gamma_;
  double psi_plus_;
  double psi_minus_;
};

/// Throws DomainError when both traces vanish: a blow-up profile is never identically zero.
Profile hat_psi(double gamma, double psi_plus, double psi_minus);

struct VanishingFit {
  double gamma_est = 0.0;
  double amp_plus = 0.0;
  double amp_minus = 0.0;
  /// min of the two one-sided coefficients of determination.
  double r_squared = 0.0;
  double slope_plus = 0.0;
  double slope_minus = 0.0;
};

/// Least-squares fit of log|u| against log|x| on the interior nodes with |x| in
/// [r_lo, r_hi], separately on each side of 0. Requires 0 inside the grid, the window inside
/// (2h, dist(0, boundary)/2), and at least 4 nodes per side.
VanishingFit vanishing_order_fit(const Eigen::VectorXd& u, const Grid& grid, double r_lo,
                                 double r_hi);

/// Blow-up profile of a nodal vector at the origin: the angular mode whose vanishing order is
/// closest to the fitted one, with amplitudes u(x) / |x|^gamma read at the nodes nearest 0
/// (the value at 0 itself when gamma = 0).
struct ProfileEstimate {
  Profile profile{0.0, 1.0, 1.0};
  /// 1-based index of the selected angular eigenvalue.
  int angular_index = 1;
  VanishingFit fit;
};

ProfileEstimate estimate_profile(const Eigen::VectorXd& u, const Grid& grid,
                                 const AngularSpectrum& spectrum, double r_lo, double r_hi);

}  // namespace fraclab
