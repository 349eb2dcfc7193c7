#include "fraclab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fraclab/assembly.hpp"
#include "fraclab/capacity.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

SweepTable run_sweep(const SweepConfig& config) {
  if (config.j < 1) throw ConfigError("sweep: j must be >= 1");
  if (config.eps.empty()) throw ConfigError("sweep: eps list is empty");
  for (std::size_t i = 0; i < config.eps.size(); ++i) {
    if (!(config.eps[i] > 0.0)) throw ConfigError("sweep: eps values must be positive");
    if (i > 0 && !(config.eps[i] < config.eps[i - 1])) {
      throw ConfigError("sweep: eps list must be strictly decreasing");
    }
  }
  const int count = std::max(config.eig_count, config.j + 1);

  SweepTable table;
  table.config = config;
  table.config.eig_count = count;
  table.params = make_params(1, config.s);
  const Grid grid(config.x_min, config.x_max, config.n_cells);
  const double eps_min = config.eps.back();
  if (grid.h() > eps_min / config.resolution_factor) {
    std::ostringstream msg;
    msg << "sweep: h = " << grid.h() << " exceeds eps_min / " << config.resolution_factor << " = "
        << eps_min / config.resolution_factor;
    throw ResolutionError(msg.str());
  }

  const StiffnessOperator a(grid, table.params);
  const MassOperator m(grid);
  const NodeSet all = grid.all_interior();
  const EigenPairs base = solve_eigs(a, m, all, count, config.eig);
  table.base_values.assign(base.values.data(), base.values.data() + count);

  const int j0 = config.j - 1;
  const double lambda0 = base.values(j0);
  auto gap_check = [&](int other) {
    const double gap = std::abs(base.values(other) - lambda0) / lambda0;
    if (gap < config.min_relative_gap) {
      std::ostringstream msg;
      msg << "sweep: lambda_" << config.j << " is not simple on this grid (relative gap to lambda_"
          << other + 1 << " is " << gap << " < " << config.min_relative_gap << ")";
      throw ConfigError(msg.str());
    }
  };
  gap_check(j0 + 1);
  if (j0 > 0) gap_check(j0 - 1);
  table.u_j = base.vectors.col(j0);

  for (double eps : config.eps) {
    const NodeMask mask = nodes_in_set(grid, scaled(config.k, eps));
    const NodeSet free = set_difference(all, mask.indices);
    const EigenPairs hole = solve_eigs(a, m, free, count, config.eig);
    const CapacityResult cap = condenser_capacity(a, all, mask);
    const CapacityResult ucap = u_capacity(a, all, mask, table.u_j);

    SweepRow row;
    row.eps = eps;
    row.lambda0 = lambda0;
    row.lambda_eps = hole.values(j0);
    row.shift = row.lambda_eps - lambda0;
    row.ucap = ucap.value;
    row.ratio = row.shift / row.ucap;
    row.cap = cap.value;
    row.hole_values.assign(hole.values.data(), hole.values.data() + count);
    row.potential_min = cap.potential.minCoeff();
    row.potential_max = cap.potential.maxCoeff();
    row.hole_nodes = static_cast<int>(mask.indices.size());
    table.rows.push_back(std::move(row));
  }
  return table;
}

double RateFit::prefactor() const { return std::exp(log_prefactor); }

RateFit fit_rate(std::span<const std::pair<double, double>> series, std::span<const double> window) {
  std::vector<std::pair<double, double>> points;
  if (window.empty()) {
    points.assign(series.begin(), series.end());
    std::sort(points.begin(), points.end());
    if (points.size() > 3) points.resize(3);
  } else {
    for (const auto& pt : series) {
      if (std::find(window.begin(), window.end(), pt.first) != window.end()) points.push_back(pt);
    }
  }
  if (points.size() < 3) throw DomainError("fit_rate: need at least 3 points in the window");

  RateFit fit;
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& [eps, value] : points) {
    if (!(eps > 0.0) || !(value > 0.0)) {
      std::ostringstream msg;
      msg << "fit_rate: nonpositive point (" << eps << ", " << value << ") in the window";
      throw DomainError(msg.str());
    }
    fit.window.push_back(eps);
    lx.push_back(std::log(eps));
    ly.push_back(std::log(value));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  fit.exponent = sxy / sxx;
  fit.log_prefactor = my - fit.exponent * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - fit.log_prefactor - fit.exponent * lx[i];
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

Verdict verify_expansion(const SweepTable& table, double tol) {
  if (table.rows.empty()) throw DomainError("verify_expansion: empty table");
  Verdict v;
  v.name = "expansion";
  for (const SweepRow& row : table.rows) v.sequence.push_back(row.ratio);
  const std::size_t n = v.sequence.size();
  const double final_dev = std::abs(v.sequence.back() - 1.0);
  bool monotone = true;
  for (std::size_t i = (n >= 3 ? n - 3 : 0) + 1; i < n; ++i) {
    if (std::abs(v.sequence[i] - 1.0) > std::abs(v.sequence[i - 1] - 1.0)) monotone = false;
  }
  v.pass = final_dev <= tol && monotone;
  std::ostringstream msg;
  msg << "|ratio - 1| at smallest eps = " << final_dev << " (tol " << tol << "); last three "
      << (monotone ? "nonincreasing" : "NOT nonincreasing");
  v.detail = msg.str();
  return v;
}

Verdict scaling_prefactor_check(const SweepTable& table, double gamma, double cap_ref, double tol) {
  if (table.rows.empty()) throw DomainError("scaling_prefactor_check: empty table");
  const double exponent = table.params.n_dim + 2.0 * (gamma - table.params.s);
  Verdict v;
  v.name = "scaling_prefactor";
  for (const SweepRow& row : table.rows) v.sequence.push_back(row.ucap / std::pow(row.eps, exponent));
  double measure = 0.0;
  for (const Interval& iv : table.config.k) measure += iv.hi - iv.lo;
  const double last = v.sequence.back();
  const double rel = cap_ref != 0.0 ? std::abs(last / cap_ref - 1.0) : INFINITY;
  const bool positive_ok = !(measure > 0.0) || cap_ref > 0.0;
  v.pass = rel <= tol && positive_ok;
  std::ostringstream msg;
  msg << "ucap/eps^" << exponent << " at smallest eps = " << last << ", reference " << cap_ref
      << ", relative deviation " << rel << " (tol " << tol << ")";
  if (!positive_ok) msg << "; reference not positive although K has positive measure";
  v.detail = msg.str();
  return v;
}

Verdict continuity_check(const SweepTable& table) {
  if (table.rows.empty()) throw DomainError("continuity_check: empty table");
  Verdict v;
  v.name = "continuity";
  const SweepRow& first = table.rows.front();
  const double c = first.shift / std::sqrt(first.cap);
  v.pass = true;
  for (const SweepRow& row : table.rows) {
    const double bound = c * std::sqrt(row.cap);
    v.sequence.push_back(row.shift / std::sqrt(row.cap));
    if (row.shift > bound * (1.0 + 1e-12)) v.pass = false;
  }
  std::ostringstream msg;
  msg << "C calibrated at eps = " << first.eps << ": " << c;
  v.detail = msg.str();
  return v;
}

double classical_dirichlet_eigenvalue(const Grid& grid, int j) {
  const int n = grid.interior_count();
  if (j < 1 || j > n) throw DomainError("classical_dirichlet_eigenvalue: bad index");
  const double h = grid.h();
  const TridiagonalForm k(Eigen::VectorXd::Constant(n, 2.0 / h), Eigen::VectorXd::Constant(n - 1, -1.0 / h));
  const MassOperator m(grid);
  return solve_generalized(k.dense(), m.dense(), j).values(j - 1);
}

double classical_u_capacity(double x_min, double x_max, double a, double b,
                            const std::function<double(double)>& phi,
                            const std::function<double(double)>& dphi) {
  if (!(x_min < a && a <= b && b < x_max)) {
    throw GeometryError("classical_u_capacity: need x_min < a <= b < x_max");
  }
  double interior = 0.0;
  if (b > a) {
    // Composite Gauss-Legendre; phi is smooth on [a, b].
    constexpr int kPanels = 8;
    const double w = (b - a) / kPanels;
    for (int p = 0; p < kPanels; ++p) {
      const QuadratureRule rule = gauss_legendre(32, a + p * w, a + (p + 1) * w);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double d = dphi(rule.nodes[q]);
        interior += rule.weights[q] * d * d;
      }
    }
  }
  const double pa = phi(a);
  const double pb = phi(b);
  return interior + pa * pa / (a - x_min) + pb * pb / (x_max - b);
}

ComparisonTable spectral_comparison(const Grid& grid, double s, int j,
                                    std::span<const double> eps_list) {
  ComparisonTable out;
  out.s = s;
  out.j = j;
  const double len = grid.x_max() - grid.x_min();
  const double pi = std::numbers::pi;
  out.classical_lambda_exact = std::pow(j * pi / len, 2);
  out.classical_lambda = classical_dirichlet_eigenvalue(grid, j);
  out.nu = std::pow(out.classical_lambda, s);

  const double amp = std::sqrt(2.0 / len);
  const double freq = j * pi / len;
  const double x0 = grid.x_min();
  auto phi = [=](double x) { return amp * std::sin(freq * (x - x0)); };
  auto dphi = [=](double x) { return amp * freq * std::cos(freq * (x - x0)); };
  const double factor = s * std::pow(out.classical_lambda, s - 1.0);
  // Limit eps -> 0 of the classical u-capacity of [-eps, eps]: phi(0)^2 (1/(0 - x_min) + 1/(x_max - 0)).
  out.predicted_limit = factor * phi(0.0) * phi(0.0) * (1.0 / (0.0 - grid.x_min()) + 1.0 / grid.x_max());

  SweepConfig cfg;
  cfg.s = s;
  cfg.j = j;
  cfg.k = {{-1.0, 1.0}};
  cfg.eps.assign(eps_list.begin(), eps_list.end());
  cfg.x_min = grid.x_min();
  cfg.x_max = grid.x_max();
  cfg.n_cells = grid.n_cells();
  const SweepTable sweep = run_sweep(cfg);

  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    ComparisonRow row;
    row.eps = eps_list[i];
    row.classical_ucap = classical_u_capacity(grid.x_min(), grid.x_max(), -row.eps, row.eps, phi, dphi);
    row.predicted_shift = factor * row.classical_ucap;
    row.restricted_shift = sweep.rows[i].shift;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace fraclab
