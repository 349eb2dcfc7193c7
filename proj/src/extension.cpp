#include "fraclab/extension.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "fraclab/capacity.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {
namespace {

// Graded offsets 0 < o_1 < ... < o_k = width with first step h and ratio growth.
std::vector<double> padding_offsets(double h, double width, double growth) {
  std::vector<double> out;
  double pos = 0.0;
  double step = h;
  while (pos + step < width) {
    pos += step;
    out.push_back(pos);
    step *= growth;
  }
  // Merge a short final cell into its neighbour.
  if (!out.empty() && width - out.back() < 0.5 * step / growth) out.pop_back();
  out.push_back(width);
  return out;
}

double power_diff(double lo, double hi, double q) {
  if (lo == 0.0) return std::pow(hi, q);
  return std::pow(lo, q) * std::expm1(q * std::log1p((hi - lo) / lo));
}

// int_{lo}^{hi} t^{a+m} dt for lo >= 0.
double t_moment(double lo, double hi, double a, int m) {
  const double q = a + m + 1.0;
  return power_diff(lo, hi, q) / q;
}

Eigen::MatrixXd p1_stiffness(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index e = 0; e + 1 < n; ++e) {
    const double d = x(e + 1) - x(e);
    k(e, e) += 1.0 / d;
    k(e + 1, e + 1) += 1.0 / d;
    k(e, e + 1) -= 1.0 / d;
    k(e + 1, e) -= 1.0 / d;
  }
  return k;
}

Eigen::MatrixXd p1_mass(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index e = 0; e + 1 < n; ++e) {
    const double d = x(e + 1) - x(e);
    m(e, e) += d / 3.0;
    m(e + 1, e + 1) += d / 3.0;
    m(e, e + 1) += d / 6.0;
    m(e + 1, e) += d / 6.0;
  }
  return m;
}

// Weighted 1D matrices with weight t^a, exact moments per layer.
void weighted_t_matrices(const Eigen::VectorXd& t, double a, Eigen::MatrixXd& kt,
                         Eigen::MatrixXd& mt) {
  const Eigen::Index n = t.size();
  kt = Eigen::MatrixXd::Zero(n, n);
  mt = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index e = 0; e + 1 < n; ++e) {
    const double lo = t(e);
    const double hi = t(e + 1);
    const double d = hi - lo;
    const double m0 = t_moment(lo, hi, a, 0);
    const double m1 = t_moment(lo, hi, a, 1);
    const double m2 = t_moment(lo, hi, a, 2);
    const double left = (hi * hi * m0 - 2.0 * hi * m1 + m2) / (d * d);
    const double cross = (-m2 + (lo + hi) * m1 - lo * hi * m0) / (d * d);
    const double right = (m2 - 2.0 * lo * m1 + lo * lo * m0) / (d * d);
    mt(e, e) += left;
    mt(e + 1, e + 1) += right;
    mt(e, e + 1) += cross;
    mt(e + 1, e) += cross;
    kt(e, e) += m0 / (d * d);
    kt(e + 1, e + 1) += m0 / (d * d);
    kt(e, e + 1) -= m0 / (d * d);
    kt(e + 1, e) -= m0 / (d * d);
  }
}

}  // namespace

ExtMesh build_extension_mesh(const Grid& grid, double T, int m_t, double beta,
                             const LateralPadding& padding) {
  if (!(T > 0.0)) throw ParameterError("build_extension_mesh: T must be positive");
  if (m_t < 4) throw ParameterError("build_extension_mesh: m_t must be at least 4");
  if (!(beta >= 1.0)) throw ParameterError("build_extension_mesh: beta must be >= 1");
  if (!(padding.growth >= 1.0)) throw ParameterError("build_extension_mesh: growth must be >= 1");

  ExtMesh mesh{grid, {}, {}, 0, T, m_t, beta, padding.width < 0.0 ? T : padding.width};
  std::vector<double> xs;
  const std::vector<double> offsets =
      mesh.padding > 0.0 ? padding_offsets(grid.h(), mesh.padding, padding.growth)
                         : std::vector<double>{};
  for (auto it = offsets.rbegin(); it != offsets.rend(); ++it) xs.push_back(grid.x_min() - *it);
  mesh.omega_offset = static_cast<int>(xs.size());
  for (double v : grid.nodes()) xs.push_back(v);
  for (double o : offsets) xs.push_back(grid.x_max() + o);
  mesh.x = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));

  mesh.t.resize(m_t + 1);
  for (int j = 0; j <= m_t; ++j) {
    mesh.t(j) = (j == m_t) ? T : T * std::pow(static_cast<double>(j) / m_t, beta);
  }
  return mesh;
}

ExtOperator::ExtOperator(ExtMesh mesh, const FracParams& params)
    : mesh_(std::move(mesh)), params_(params) {
  const double a = 1.0 - 2.0 * params.s;
  kx_ = p1_stiffness(mesh_.x);
  mx_ = p1_mass(mesh_.x);
  weighted_t_matrices(mesh_.t, a, kt_, mt_);

  const int nx = mesh_.nx();
  const int nt = mesh_.nt();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(nx) * nt * 9);
  for (int j = 0; j < nt; ++j) {
    for (int jj = std::max(0, j - 1); jj <= std::min(nt - 1, j + 1); ++jj) {
      for (int i = 0; i < nx; ++i) {
        for (int ii = std::max(0, i - 1); ii <= std::min(nx - 1, i + 1); ++ii) {
          const double v = kx_(i, ii) * mt_(j, jj) + mx_(i, ii) * kt_(j, jj);
          if (v != 0.0) trips.emplace_back(mesh_.index(i, j), mesh_.index(ii, jj), v);
        }
      }
    }
  }
  q_.resize(nx * nt, nx * nt);
  q_.setFromTriplets(trips.begin(), trips.end());
}

bool ExtOperator::is_dirichlet(int i, int j) const {
  const int nx = mesh_.nx();
  if (i == 0 || i == nx - 1 || j == mesh_.nt() - 1) return true;
  if (j == 0) {
    const int first = mesh_.omega_offset + 1;
    const int last = mesh_.omega_offset + mesh_.grid.n_cells() - 1;
    return i < first || i > last;
  }
  return false;
}

double ExtOperator::form(const Eigen::VectorXd& u) const { return u.dot(q_ * u); }

ExtOperator assemble_extension(const ExtMesh& mesh, const FracParams& params) {
  if (!(params.s > 0.0 && params.s < 1.0)) {
    throw ParameterError("assemble_extension: requires 0 < s < 1");
  }
  return ExtOperator(mesh, params);
}

TraceOperator dtn_schur(const ExtOperator& op) {
  const ExtMesh& mesh = op.mesh();
  const int nxf = mesh.nx() - 2;
  const int ntf = mesh.nt() - 1;  // layers 0..m_t-1
  const Eigen::MatrixXd kx = op.kx().block(1, 1, nxf, nxf);
  const Eigen::MatrixXd mx = op.mx().block(1, 1, nxf, nxf);
  const Eigen::MatrixXd kt = op.kt().topLeftCorner(ntf, ntf);
  const Eigen::MatrixXd mt = op.mt().topLeftCorner(ntf, ntf);

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> modes(kx, mx);
  if (modes.info() != Eigen::Success) {
    throw NumericalError("dtn_schur: x-direction eigendecomposition failed");
  }
  const Eigen::VectorXd& omega = modes.eigenvalues();
  Eigen::VectorXd sigma(nxf);
  for (int k = 0; k < nxf; ++k) {
    // Eliminate layers from the top down; the last pivot is the trace Schur value.
    double pivot = omega(k) * mt(ntf - 1, ntf - 1) + kt(ntf - 1, ntf - 1);
    for (int j = ntf - 2; j >= 0; --j) {
      const double off = omega(k) * mt(j, j + 1) + kt(j, j + 1);
      pivot = omega(k) * mt(j, j) + kt(j, j) - off * off / pivot;
      if (!(pivot > 0.0)) throw NumericalError("dtn_schur: nonpositive pivot");
    }
    sigma(k) = pivot;
  }
  const Eigen::MatrixXd mq = mx * modes.eigenvectors();
  const Eigen::MatrixXd s_full = mq * sigma.asDiagonal() * mq.transpose();

  const int n = mesh.grid.interior_count();
  TraceOperator out;
  out.s.resize(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      out.s(r, c) = s_full(mesh.trace_x_index(r) - 1, mesh.trace_x_index(c) - 1);
    }
  }
  out.s = 0.5 * (out.s + out.s.transpose()).eval();
  return out;
}

namespace {

// Partition of non-Dirichlet nodes into trace (domain part of t = 0) and interior.
struct Partition {
  std::vector<int> trace;     // global indices, grid interior order
  std::vector<int> interior;  // global indices
};

Partition partition(const ExtOperator& op) {
  const ExtMesh& mesh = op.mesh();
  Partition part;
  for (int p = 0; p < mesh.grid.interior_count(); ++p) {
    part.trace.push_back(mesh.index(mesh.trace_x_index(p), 0));
  }
  for (int j = 1; j < mesh.nt(); ++j) {
    for (int i = 0; i < mesh.nx(); ++i) {
      if (!op.is_dirichlet(i, j)) part.interior.push_back(mesh.index(i, j));
    }
  }
  return part;
}

Eigen::SparseMatrix<double> submatrix(const Eigen::SparseMatrix<double>& q,
                                      const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> col_pos(static_cast<std::size_t>(q.cols()), -1);
  std::vector<int> row_pos(static_cast<std::size_t>(q.rows()), -1);
  for (std::size_t c = 0; c < cols.size(); ++c) col_pos[static_cast<std::size_t>(cols[c])] = static_cast<int>(c);
  for (std::size_t r = 0; r < rows.size(); ++r) row_pos[static_cast<std::size_t>(rows[r])] = static_cast<int>(r);
  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < q.outerSize(); ++k) {
    const int c = col_pos[static_cast<std::size_t>(k)];
    if (c < 0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(q, k); it; ++it) {
      const int r = row_pos[static_cast<std::size_t>(it.row())];
      if (r >= 0) trips.emplace_back(r, c, it.value());
    }
  }
  Eigen::SparseMatrix<double> out(static_cast<Eigen::Index>(rows.size()),
                                  static_cast<Eigen::Index>(cols.size()));
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

}  // namespace

TraceOperator dtn_schur_sparse(const ExtOperator& op) {
  const Partition part = partition(op);
  const Eigen::SparseMatrix<double> a_ii = submatrix(op.matrix(), part.interior, part.interior);
  const Eigen::SparseMatrix<double> a_it = submatrix(op.matrix(), part.interior, part.trace);
  const Eigen::MatrixXd a_tt = Eigen::MatrixXd(submatrix(op.matrix(), part.trace, part.trace));

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a_ii);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("dtn_schur_sparse: factorization of the interior block failed");
  }
  const Eigen::MatrixXd x = solver.solve(Eigen::MatrixXd(a_it));
  TraceOperator out;
  out.s = a_tt - Eigen::MatrixXd(a_it.transpose()) * x;
  out.s = 0.5 * (out.s + out.s.transpose()).eval();
  return out;
}

EigenPairs extension_eigs(const TraceOperator& trace, const MassOperator& mass,
                          const FracParams& params, int count, const EigOptions& options) {
  return solve_generalized(trace.s, params.kappa_s * mass.dense(), count, options);
}

Eigen::VectorXd embed_trace(const ExtMesh& mesh, const Eigen::VectorXd& trace) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(mesh.nx() * mesh.nt());
  for (int p = 0; p < mesh.grid.interior_count(); ++p) {
    u(mesh.index(mesh.trace_x_index(p), 0)) = trace(p);
  }
  return u;
}

double extension_capacity(const ExtOperator& op, const NodeMask& k_mask,
                          const Eigen::VectorXd& data) {
  const ExtMesh& mesh = op.mesh();
  if (data.size() != mesh.grid.interior_count()) {
    throw DomainError("extension_capacity: data length must equal the interior node count");
  }
  if (k_mask.indices.empty()) return 0.0;

  std::vector<int> fixed;
  std::vector<char> is_fixed(static_cast<std::size_t>(mesh.nx() * mesh.nt()), 0);
  for (int p : k_mask.indices) {
    if (p < 0 || p >= mesh.grid.interior_count()) {
      throw DomainError("extension_capacity: K node outside the domain trace");
    }
    const int g = mesh.index(mesh.trace_x_index(p), 0);
    fixed.push_back(g);
    is_fixed[static_cast<std::size_t>(g)] = 1;
  }
  std::vector<int> free;
  for (int j = 0; j < mesh.nt(); ++j) {
    for (int i = 0; i < mesh.nx(); ++i) {
      const int g = mesh.index(i, j);
      if (!op.is_dirichlet(i, j) && !is_fixed[static_cast<std::size_t>(g)]) free.push_back(g);
    }
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(mesh.nx() * mesh.nt());
  Eigen::VectorXd d(static_cast<Eigen::Index>(fixed.size()));
  for (std::size_t k = 0; k < fixed.size(); ++k) {
    d(static_cast<Eigen::Index>(k)) = data(k_mask.indices[k]);
    w(fixed[k]) = data(k_mask.indices[k]);
  }
  if (!free.empty()) {
    const Eigen::SparseMatrix<double> a_ff = submatrix(op.matrix(), free, free);
    const Eigen::SparseMatrix<double> a_fk = submatrix(op.matrix(), free, fixed);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a_ff);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("extension_capacity: factorization failed");
    }
    const Eigen::VectorXd rhs = -(a_fk * d);
    const Eigen::VectorXd x = solver.solve(rhs);
    if (solver.info() != Eigen::Success) throw NumericalError("extension_capacity: solve failed");
    for (std::size_t k = 0; k < free.size(); ++k) w(free[k]) = x(static_cast<Eigen::Index>(k));
  }
  return op.form(w) / op.params().kappa_s;
}

HalfspaceHardyTerms halfspace_hardy_terms(const ExtOperator& op, const Eigen::VectorXd& u) {
  const ExtMesh& mesh = op.mesh();
  if (u.size() != mesh.nx() * mesh.nt()) {
    throw DomainError("halfspace_hardy_terms: vector length must equal the mesh node count");
  }
  const double a = 1.0 - 2.0 * op.params().s;
  const double c = (op.params().n_dim - 2.0 * op.params().s) / 2.0;
  constexpr int kPoints = 8;

  double integral = 0.0;
  for (int j = 0; j + 1 < mesh.nt(); ++j) {
    const double t0 = mesh.t(j);
    const double t1 = mesh.t(j + 1);
    const QuadratureRule rt =
        j == 0 ? gauss_left_power(kPoints, t0, t1, a) : gauss_legendre(kPoints, t0, t1);
    for (int i = 0; i + 1 < mesh.nx(); ++i) {
      const double u00 = u(mesh.index(i, j));
      const double u10 = u(mesh.index(i + 1, j));
      const double u01 = u(mesh.index(i, j + 1));
      const double u11 = u(mesh.index(i + 1, j + 1));
      if (u00 == 0.0 && u10 == 0.0 && u01 == 0.0 && u11 == 0.0) continue;
      const double x0 = mesh.x(i);
      const double x1 = mesh.x(i + 1);
      if (j == 0 && x0 <= 0.0 && x1 >= 0.0) {
        throw DomainError("halfspace_hardy_terms: U must vanish on elements touching the origin");
      }
      const QuadratureRule rx = gauss_legendre(kPoints, x0, x1);
      for (std::size_t qt = 0; qt < rt.nodes.size(); ++qt) {
        const double t = rt.nodes[qt];
        const double wt = (j == 0 ? 1.0 : std::pow(t, a)) * rt.weights[qt];
        const double st = (t - t0) / (t1 - t0);
        for (std::size_t qx = 0; qx < rx.nodes.size(); ++qx) {
          const double x = rx.nodes[qx];
          const double sx = (x - x0) / (x1 - x0);
          const double val = (1 - sx) * (1 - st) * u00 + sx * (1 - st) * u10 +
                             (1 - sx) * st * u01 + sx * st * u11;
          integral += wt * rx.weights[qx] * val * val / (x * x + t * t);
        }
      }
    }
  }
  return {c * c * integral, op.form(u)};
}

namespace {

// Uniform on [-1, 1) from the top 53 bits; independent of the standard distributions.
double symmetric_uniform(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

}  // namespace

PathComparison compare_paths(double s, double x_min, double x_max, const ExtensionSetup& setup,
                             const std::vector<Interval>& k, int count, int trials,
                             unsigned long long seed) {
  if (trials < 1) throw DomainError("compare_paths: trials must be positive");
  const FracParams params = make_params(1, s);
  const Grid grid(x_min, x_max, setup.n_cells);
  const StiffnessOperator a(grid, params);
  const MassOperator m(grid);
  const NodeSet all = grid.all_interior();
  const NodeMask mask = nodes_in_set(grid, k);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(grid.interior_count());

  PathComparison out;
  out.setup = setup;
  const EigenPairs direct = solve_eigs(a, m, all, count);
  out.lambda_direct.assign(direct.values.data(), direct.values.data() + count);
  out.cap_direct = condenser_capacity(a, all, mask).value;

  const ExtMesh mesh = build_extension_mesh(grid, setup.T, setup.m_t, setup.beta, setup.padding);
  const ExtOperator op = assemble_extension(mesh, params);
  out.mesh_nodes = mesh.nx() * mesh.nt();
  const TraceOperator trace = dtn_schur(op);
  const EigenPairs ext = extension_eigs(trace, m, params, count);
  out.lambda_extension.assign(ext.values.data(), ext.values.data() + count);
  out.cap_extension = extension_capacity(op, mask, one);
  out.trace_min_eigenvalue = solve_generalized(trace.s, Eigen::MatrixXd::Identity(trace.s.rows(), trace.s.cols()), 1).values(0);

  std::mt19937_64 rng(seed);
  out.energy_ratio_min = INFINITY;
  out.energy_ratio_max = -INFINITY;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd x(grid.interior_count());
    for (auto& v : x) v = symmetric_uniform(rng);
    const double ratio = x.dot(trace.s * x) / (params.kappa_s * a.form(x));
    out.energy_ratio_min = std::min(out.energy_ratio_min, ratio);
    out.energy_ratio_max = std::max(out.energy_ratio_max, ratio);
  }

  // Random fields vanishing on the elements that touch the origin of the half-plane.
  std::vector<char> near_origin(static_cast<std::size_t>(mesh.nx()), 0);
  for (int i = 0; i + 1 < mesh.nx(); ++i) {
    if (mesh.x(i) <= 0.0 && mesh.x(i + 1) >= 0.0) near_origin[i] = near_origin[i + 1] = 1;
  }
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(mesh.nx() * mesh.nt());
    for (int j = 0; j < mesh.nt(); ++j) {
      for (int i = 0; i < mesh.nx(); ++i) {
        const double v = symmetric_uniform(rng);
        if (op.is_dirichlet(i, j) || (j <= 1 && near_origin[static_cast<std::size_t>(i)])) continue;
        u(mesh.index(i, j)) = v;
      }
    }
    const HalfspaceHardyTerms h = halfspace_hardy_terms(op, u);
    out.hardy_ratio_max = std::max(out.hardy_ratio_max, h.lhs / h.rhs);
  }
  return out;
}

}  // namespace fraclab
