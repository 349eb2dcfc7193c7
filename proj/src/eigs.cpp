#include "fraclab/eigs.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "fraclab/errors.hpp"

namespace fraclab {
namespace {

bool is_tridiagonal(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      if (std::abs(r - c) > 1 && m(r, c) != 0.0) return false;
    }
  }
  return true;
}

// Lower Cholesky factor of an SPD matrix; bidiagonal when `m` is tridiagonal.
struct CholeskyFactor {
  bool banded = false;
  Eigen::VectorXd diag;  // banded case
  Eigen::VectorXd sub;   // banded case, sub(i) = L(i+1, i)
  Eigen::LLT<Eigen::MatrixXd> dense;

  explicit CholeskyFactor(const Eigen::MatrixXd& m) : banded(is_tridiagonal(m)) {
    const Eigen::Index n = m.rows();
    if (banded) {
      diag.resize(n);
      sub.resize(std::max<Eigen::Index>(n - 1, 0));
      for (Eigen::Index i = 0; i < n; ++i) {
        double d = m(i, i);
        if (i > 0) d -= sub(i - 1) * sub(i - 1);
        if (!(d > 0.0)) {
          std::ostringstream msg;
          msg << "solve_generalized: mass matrix not positive definite at leading minor " << i + 1;
          throw NumericalError(msg.str());
        }
        diag(i) = std::sqrt(d);
        if (i + 1 < n) sub(i) = m(i + 1, i) / diag(i);
      }
    } else {
      dense.compute(m);
      if (dense.info() != Eigen::Success) {
        throw NumericalError("solve_generalized: mass matrix not positive definite");
      }
    }
  }

  // In place: X <- L^{-1} X.
  void solve_lower(Eigen::MatrixXd& x) const {
    if (!banded) {
      dense.matrixL().solveInPlace(x);
      return;
    }
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      x(0, c) /= diag(0);
      for (Eigen::Index i = 1; i < x.rows(); ++i) {
        x(i, c) = (x(i, c) - sub(i - 1) * x(i - 1, c)) / diag(i);
      }
    }
  }

  // In place: X <- L^{-T} X.
  void solve_upper(Eigen::MatrixXd& x) const {
    if (!banded) {
      dense.matrixU().solveInPlace(x);
      return;
    }
    const Eigen::Index n = x.rows();
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      x(n - 1, c) /= diag(n - 1);
      for (Eigen::Index i = n - 2; i >= 0; --i) {
        x(i, c) = (x(i, c) - sub(i) * x(i + 1, c)) / diag(i);
      }
    }
  }
};

// Solves (T - shift I) y = b for symmetric tridiagonal T by Gaussian elimination with
// partial pivoting; exact-zero pivots are replaced by a tiny value (inverse iteration).
Eigen::VectorXd shifted_tridiagonal_solve(const Eigen::VectorXd& d, const Eigen::VectorXd& e,
                                          double shift, const Eigen::VectorXd& b) {
  const Eigen::Index n = d.size();
  // Row i of the eliminated upper-triangular system has entries u0 (diag), u1, u2.
  Eigen::VectorXd u0(n), u1 = Eigen::VectorXd::Zero(n), u2 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd rhs = b;
  const double tiny = std::numeric_limits<double>::epsilon() *
                      std::max(1.0, d.cwiseAbs().maxCoeff() + (n > 1 ? e.cwiseAbs().maxCoeff() : 0.0));
  // Current row: (a, bcoef, c) at columns i, i+1, i+2.
  double a = d(0) - shift;
  double bcoef = n > 1 ? e(0) : 0.0;
  double c = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i + 1 < n) {
      // Next row: (e_i, d_{i+1} - shift, e_{i+1}) at columns i, i+1, i+2.
      const double na = e(i);
      const double nb = d(i + 1) - shift;
      const double nc = i + 2 < n ? e(i + 1) : 0.0;
      if (std::abs(na) > std::abs(a)) {
        // Swap rows i and i+1.
        u0(i) = na;
        u1(i) = nb;
        u2(i) = nc;
        std::swap(rhs(i), rhs(i + 1));
        const double m = a / na;
        a = bcoef - m * nb;
        bcoef = c - m * nc;
        rhs(i + 1) -= m * rhs(i);
      } else {
        if (a == 0.0) a = tiny;
        u0(i) = a;
        u1(i) = bcoef;
        u2(i) = c;
        const double m = na / a;
        a = nb - m * bcoef;
        bcoef = nc - m * c;
        rhs(i + 1) -= m * rhs(i);
      }
      c = 0.0;
    } else {
      if (a == 0.0) a = tiny;
      u0(i) = a;
      u1(i) = 0.0;
      u2(i) = 0.0;
    }
  }
  Eigen::VectorXd y(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double v = rhs(i);
    if (i + 1 < n) v -= u1(i) * y(i + 1);
    if (i + 2 < n) v -= u2(i) * y(i + 2);
    y(i) = v / u0(i);
  }
  return y;
}

}  // namespace

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double v = std::abs(vectors(r, c));
      // Strict comparison keeps the lowest index on ties.
      if (v > best_abs) {
        best_abs = v;
        best = r;
      }
    }
    if (vectors.rows() > 0 && vectors(best, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

EigenPairs solve_generalized(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m, int count,
                             const EigOptions& options) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || m.rows() != n || m.cols() != n) {
    throw DomainError("solve_generalized: dimension mismatch");
  }
  if (count < 1 || count > n) {
    std::ostringstream msg;
    msg << "solve_generalized: count must lie in [1, " << n << "] (got " << count << ")";
    throw DomainError(msg.str());
  }

  // Reduce to the standard problem C y = lambda y with C = L^{-1} A L^{-T}, M = L L^T.
  const CholeskyFactor chol(m);
  Eigen::MatrixXd c = a;
  chol.solve_lower(c);
  c.transposeInPlace();
  chol.solve_lower(c);
  c = 0.5 * (c + c.transpose()).eval();

  Eigen::Tridiagonalization<Eigen::MatrixXd> tri(c);
  const Eigen::VectorXd d = tri.diagonal();
  const Eigen::VectorXd e = tri.subDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> values_only;
  values_only.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  if (values_only.info() != Eigen::Success) {
    throw NumericalError("solve_generalized: tridiagonal QR iteration did not converge");
  }

  // Inverse iteration for the lowest `count` eigenvectors of the tridiagonal matrix.
  Eigen::MatrixXd v(n, count);
  const double scale = std::max(d.cwiseAbs().maxCoeff(), n > 1 ? e.cwiseAbs().maxCoeff() : 0.0);
  for (int k = 0; k < count; ++k) {
    const double lambda = values_only.eigenvalues()(k);
    const double shift = lambda - 1e-13 * std::max(scale, std::abs(lambda));
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = 1.0 + 0.01 * std::sin(1.0 + 0.37 * i * (k + 1));
    y.normalize();
    for (int iter = 0; iter < 4; ++iter) {
      y = shifted_tridiagonal_solve(d, e, shift, y);
      for (int p = 0; p < k; ++p) y -= v.col(p).dot(y) * v.col(p);
      y.normalize();
    }
    v.col(k) = y;
  }

  Eigen::MatrixXd x = tri.matrixQ() * v;
  chol.solve_upper(x);

  EigenPairs out;
  out.tolerance = options.tolerance;
  out.values = values_only.eigenvalues().head(count);
  out.vectors = std::move(x);
  fix_signs(out.vectors);

  const double norm_a = a.cwiseAbs().colwise().sum().maxCoeff();
  const double norm_m = m.cwiseAbs().colwise().sum().maxCoeff();
  out.residuals.resize(count);
  for (int k = 0; k < count; ++k) {
    const Eigen::VectorXd xk = out.vectors.col(k);
    const double lambda = out.values(k);
    const Eigen::VectorXd r = a * xk - lambda * (m * xk);
    out.residuals(k) = r.norm() / ((norm_a + std::abs(lambda) * norm_m) * xk.norm());
    if (!(out.residuals(k) <= options.tolerance)) {
      std::ostringstream msg;
      msg << "solve_generalized: pair " << k + 1 << " residual " << out.residuals(k)
          << " exceeds tolerance " << options.tolerance;
      throw NumericalError(msg.str());
    }
  }
  return out;
}

EigenPairs solve_eigs(const StiffnessOperator& a, const MassOperator& m, const NodeSet& free,
                      int count, const EigOptions& options) {
  if (free.empty()) throw DomainError("solve_eigs: free node set is empty");
  for (int p : free) {
    if (p < 0 || p >= a.size()) throw DomainError("solve_eigs: free node outside the interior");
  }
  EigenPairs reduced = solve_generalized(a.restrict_to(free, free), m.restrict_to(free, free),
                                         count, options);
  EigenPairs out = reduced;
  out.vectors = Eigen::MatrixXd::Zero(a.size(), count);
  for (std::size_t r = 0; r < free.size(); ++r) {
    out.vectors.row(free[r]) = reduced.vectors.row(static_cast<Eigen::Index>(r));
  }
  return out;
}

double rayleigh(const StiffnessOperator& a, const MassOperator& m, const Eigen::VectorXd& x) {
  const double mass = m.form(x);
  if (!(mass > 0.0)) throw DomainError("rayleigh: vector has zero mass norm");
  return a.form(x) / mass;
}

}  // namespace fraclab
