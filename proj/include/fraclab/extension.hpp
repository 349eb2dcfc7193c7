#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

#include "fraclab/assembly.hpp"
#include "fraclab/eigs.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/params.hpp"

namespace fraclab {

/// Geometric padding of the x-direction beyond the domain on both sides.
struct LateralPadding {
  /// Padding width on each side; a negative value means "equal to T".
  double width = -1.0;
  /// Ratio between consecutive cell sizes moving away from the domain.
  double growth = 1.1;
};

/// Tensor mesh of the truncated half-plane [x_min - pad, x_max + pad] x [0, T].
/// Inside the domain the x-nodes are the grid nodes; t-layers are t_j = T (j / m_t)^beta.
struct ExtMesh {
  Grid grid;
  Eigen::VectorXd x;
  Eigen::VectorXd t;
  /// Index in `x` of the node x_min.
  int omega_offset = 0;
  double T = 0.0;
  int m_t = 0;
  double beta = 1.0;
  double padding = 0.0;

  int nx() const { return static_cast<int>(x.size()); }
  int nt() const { return static_cast<int>(t.size()); }
  /// Global index of node (i, j): x-index i, layer j.
  int index(int i, int j) const { return j * nx() + i; }
  /// x-index of grid interior node p.
  int trace_x_index(int p) const { return omega_offset + 1 + p; }
};

/// Requires T > 0, m_t >= 4, beta >= 1.
ExtMesh build_extension_mesh(const Grid& grid, double T, int m_t, double beta,
                             const LateralPadding& padding = {});

/// The weighted form q(U, V) = int t^{1-2s} grad U . grad V on bilinear elements, with the
/// t-weight integrated exactly per layer. Zero Dirichlet on x = ends, t = T and on the
/// exterior part of the trace line; the domain part of the trace line is free.
class ExtOperator {
 public:
  ExtOperator(ExtMesh mesh, const FracParams& params);

  const ExtMesh& mesh() const { return mesh_; }
  const FracParams& params() const { return params_; }
  /// Full sparse matrix over every mesh node (Dirichlet nodes included).
  const Eigen::SparseMatrix<double>& matrix() const { return q_; }
  bool is_dirichlet(int i, int j) const;
  /// Value of q(U, U) for a nodal vector over every mesh node.
  double form(const Eigen::VectorXd& u) const;

  // One-dimensional factors: q = Kx (x) Mt + Mx (x) Kt.
  const Eigen::MatrixXd& kx() const { return kx_; }
  const Eigen::MatrixXd& mx() const { return mx_; }
  const Eigen::MatrixXd& kt() const { return kt_; }
  const Eigen::MatrixXd& mt() const { return mt_; }

 private:
  ExtMesh mesh_;
  FracParams params_;
  Eigen::MatrixXd kx_, mx_, kt_, mt_;
  Eigen::SparseMatrix<double> q_;
};

ExtOperator assemble_extension(const ExtMesh& mesh, const FracParams& params);

/// Dirichlet-to-Neumann matrix on the domain trace nodes (grid interior order).
struct TraceOperator {
  Eigen::MatrixXd s;
};

/// Schur complement by fast diagonalization of the x-direction (exact for the tensor form).
TraceOperator dtn_schur(const ExtOperator& op);

/// Same Schur complement by sparse elimination of the interior block.
TraceOperator dtn_schur_sparse(const ExtOperator& op);

/// Eigenpairs of S x = lambda kappa_s M x (kappa_s divided out).
EigenPairs extension_eigs(const TraceOperator& trace, const MassOperator& mass,
                          const FracParams& params, int count, const EigOptions& options = {});

/// (1/kappa_s) min q(W, W) with W = data on K x {0}, W = 0 on the exterior trace and the
/// artificial boundary. `data` is indexed by grid interior nodes.
double extension_capacity(const ExtOperator& op, const NodeMask& k_mask,
                          const Eigen::VectorXd& data);

/// Embeds trace values (grid interior order) into a full nodal vector with zero interior.
Eigen::VectorXd embed_trace(const ExtMesh& mesh, const Eigen::VectorXd& trace);

struct HalfspaceHardyTerms {
  /// ((N-2s)/2)^2 int t^{1-2s} U^2 / |z|^2, by elementwise Gauss quadrature.
  double lhs = 0.0;
  /// int t^{1-2s} |grad U|^2, exact.
  double rhs = 0.0;
};

/// Both sides of the half-space Hardy inequality. U must vanish on every element touching
/// the origin (DomainError otherwise).
HalfspaceHardyTerms halfspace_hardy_terms(const ExtOperator& op, const Eigen::VectorXd& u);

/// Resolution of one extension-path run.
struct ExtensionSetup {
  int n_cells = 400;
  double T = 32.0;
  int m_t = 128;
  double beta = 4.0;
  LateralPadding padding;
};

/// Direct (Gagliardo) path against extension path on the same grid.
struct PathComparison {
  ExtensionSetup setup;
  std::vector<double> lambda_direct;
  std::vector<double> lambda_extension;
  double cap_direct = 0.0;
  double cap_extension = 0.0;
  /// Range over random trace vectors of (x^T S x) / (kappa_s x^T A x).
  double energy_ratio_min = 0.0;
  double energy_ratio_max = 0.0;
  /// Smallest eigenvalue of S.
  double trace_min_eigenvalue = 0.0;
  /// Largest lhs / rhs of the half-space Hardy inequality over random fields.
  double hardy_ratio_max = 0.0;
  int mesh_nodes = 0;
};

/// Runs both paths on grid(x_min, x_max, setup.n_cells); `trials` random vectors drawn from
/// a 64-bit Mersenne Twister seeded with `seed`. K is the set whose condenser capacity is compared.
PathComparison compare_paths(double s, double x_min, double x_max, const ExtensionSetup& setup,
                             const std::vector<Interval>& k, int count, int trials,
                             unsigned long long seed);

}  // namespace fraclab
