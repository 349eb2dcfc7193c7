#include "fraclab/assembly.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "fraclab/errors.hpp"

namespace fraclab {
namespace {

// Threshold above which the binomial series replaces the direct fourth difference.
constexpr std::size_t kSeriesThreshold = 8;

double fourth_difference(std::size_t k, double p) {
  if (k < kSeriesThreshold) {
    static constexpr double coeff[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
    double sum = 0.0;
    for (int m = -2; m <= 2; ++m) {
      const double d = std::abs(static_cast<double>(k) + m);
      sum += coeff[m + 2] * (d == 0.0 ? 0.0 : std::pow(d, p));
    }
    return sum;
  }
  // delta^4 k^p = k^p * sum_{j even >= 4} binom(p, j) (2^{j+1} - 8) k^{-j}
  const double kk = static_cast<double>(k);
  double binom = 1.0;   // binom(p, j)
  double inv_pow = 1.0; // k^{-j}
  double two_pow = 2.0; // 2^{j+1}
  double sum = 0.0;
  for (int j = 1; j <= 400; ++j) {
    binom *= (p - (j - 1)) / j;
    inv_pow /= kk;
    two_pow *= 2.0;
    if (j < 4 || j % 2 != 0) continue;
    const double term = binom * (two_pow - 8.0) * inv_pow;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return std::pow(kk, p) * sum;
}

// hi^q - lo^q for 0 <= lo < hi, accurate when hi - lo << lo.
double power_diff(double lo, double hi, double q) {
  if (lo == 0.0) return std::pow(hi, q);
  return std::pow(lo, q) * std::expm1(q * std::log1p((hi - lo) / lo));
}

// Integral of y^{m-2s} over [lo, hi] with 0 <= lo <= hi.
double positive_moment(double lo, double hi, int m, double s) {
  if (hi <= lo) return 0.0;
  const double q = m + 1.0 - 2.0 * s;
  return power_diff(lo, hi, q) / q;
}

}  // namespace

double toeplitz_constant(double s) {
  const double a = 2.0 * s - 3.0;
  return gamma_fn(a) * std::cos(std::numbers::pi * a / 2.0) / std::numbers::pi;
}

double toeplitz_entry(std::size_t k, double h, const FracParams& params) {
  if (params.n_dim != 1) {
    throw ParameterError("toeplitz_entry: only n_dim = 1 is supported");
  }
  if (!(h > 0.0)) throw ParameterError("toeplitz_entry: h must be positive");
  const double s = params.s;
  return toeplitz_constant(s) * std::pow(h, 1.0 - 2.0 * s) * fourth_difference(k, 3.0 - 2.0 * s);
}

StiffnessOperator::StiffnessOperator(const Grid& grid, const FracParams& params)
    : grid_(grid), params_(params) {
  if (params.n_dim != 1) {
    throw ParameterError("assemble_stiffness: only n_dim = 1 is supported");
  }
  const auto n_gen = static_cast<std::size_t>(grid.n_cells()) + 1;
  generator_.resize(n_gen);
  for (std::size_t k = 0; k < n_gen; ++k) generator_[k] = toeplitz_entry(k, grid.h(), params);

  const int n = size();
  dense_.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      dense_(i, j) = generator_[static_cast<std::size_t>(std::abs(i - j))];
    }
  }
}

double StiffnessOperator::entry(int i, int j) const {
  return generator_[static_cast<std::size_t>(std::abs(i - j))];
}

Eigen::MatrixXd StiffnessOperator::restrict_to(const NodeSet& rows, const NodeSet& cols) const {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = entry(rows[r], cols[c]);
    }
  }
  return out;
}

Eigen::VectorXd StiffnessOperator::apply(const Eigen::VectorXd& x) const {
  return dense_ * x;
}

double StiffnessOperator::form(const Eigen::VectorXd& x) const { return x.dot(apply(x)); }

StiffnessOperator assemble_stiffness(const Grid& grid, const FracParams& params) {
  return StiffnessOperator(grid, params);
}

TridiagonalForm::TridiagonalForm(Eigen::VectorXd diag, Eigen::VectorXd off)
    : diag_(std::move(diag)), off_(std::move(off)) {}

double TridiagonalForm::entry(int i, int j) const {
  if (i == j) return diag_(i);
  if (std::abs(i - j) == 1) return off_(std::min(i, j));
  return 0.0;
}

Eigen::VectorXd TridiagonalForm::apply(const Eigen::VectorXd& x) const {
  const Eigen::Index n = diag_.size();
  Eigen::VectorXd y = diag_.cwiseProduct(x);
  if (n > 1) {
    y.head(n - 1) += off_.cwiseProduct(x.tail(n - 1));
    y.tail(n - 1) += off_.cwiseProduct(x.head(n - 1));
  }
  return y;
}

double TridiagonalForm::form(const Eigen::VectorXd& x) const { return x.dot(apply(x)); }

Eigen::MatrixXd TridiagonalForm::dense() const {
  const Eigen::Index n = diag_.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  out.diagonal() = diag_;
  if (n > 1) {
    out.diagonal(1) = off_;
    out.diagonal(-1) = off_;
  }
  return out;
}

Eigen::MatrixXd TridiagonalForm::restrict_to(const NodeSet& rows, const NodeSet& cols) const {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = entry(rows[r], cols[c]);
    }
  }
  return out;
}

namespace {

TridiagonalForm mass_form(const Grid& grid) {
  const int n = grid.interior_count();
  const double h = grid.h();
  return {Eigen::VectorXd::Constant(n, 4.0 * h / 6.0), Eigen::VectorXd::Constant(n - 1, h / 6.0)};
}

TridiagonalForm hardy_form(const Grid& grid, double s) {
  if (!(2.0 * s < 1.0) && grid.x_min() <= 0.0 && grid.x_max() >= 0.0) {
    throw DomainError("assemble_hardy_form: requires 2s < 1 when 0 lies in the closed domain");
  }
  const int n = grid.interior_count();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off = Eigen::VectorXd::Zero(std::max(n - 1, 0));
  // Element e spans grid nodes e and e+1, i.e. interior indices e-1 and e.
  for (int e = 0; e < grid.n_cells(); ++e) {
    const double a = grid.node(e);
    const double b = grid.node(e + 1);
    const double d = b - a;
    const double m0 = weighted_moment(a, b, 0, s);
    const double m1 = weighted_moment(a, b, 1, s);
    const double m2 = weighted_moment(a, b, 2, s);
    const double left = (b * b * m0 - 2.0 * b * m1 + m2) / (d * d);
    const double cross = (-m2 + (a + b) * m1 - a * b * m0) / (d * d);
    const double right = (m2 - 2.0 * a * m1 + a * a * m0) / (d * d);
    const int pl = e - 1;
    const int pr = e;
    if (pl >= 0) diag(pl) += left;
    if (pr < n) diag(pr) += right;
    if (pl >= 0 && pr < n) off(pl) += cross;
  }
  return {std::move(diag), std::move(off)};
}

}  // namespace

MassOperator::MassOperator(const Grid& grid) : TridiagonalForm(mass_form(grid)), grid_(grid) {}

MassOperator assemble_mass(const Grid& grid) { return MassOperator(grid); }

double weighted_moment(double a, double b, int m, double s) {
  if (!(a < b)) return 0.0;
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  if (a >= 0.0) return positive_moment(a, b, m, s);
  if (b <= 0.0) return sign * positive_moment(-b, -a, m, s);
  if (!(2.0 * s < 1.0)) {
    throw DomainError("weighted_moment: |x|^{-2s} is not integrable at 0 for 2s >= 1");
  }
  return sign * positive_moment(0.0, -a, m, s) + positive_moment(0.0, b, m, s);
}

HardyForm::HardyForm(const Grid& grid, double s)
    : TridiagonalForm(hardy_form(grid, s)), grid_(grid), s_(s) {}

HardyForm assemble_hardy_form(const Grid& grid, double s) { return HardyForm(grid, s); }

}  // namespace fraclab
