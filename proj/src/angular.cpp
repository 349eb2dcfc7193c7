#include "fraclab/angular.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fraclab/eigs.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {
namespace {

constexpr int kQuadPoints = 24;
constexpr double kHalfPi = std::numbers::pi / 2.0;

// (sin tau / tau)^a, the smooth factor left after pulling tau^a out of sin^a tau.
double sinc_power(double tau, double a) {
  if (tau == 0.0) return 1.0;
  return std::pow(std::sin(tau) / tau, a);
}

struct ElementIntegrals {
  double w0 = 0.0;     // int w
  double left = 0.0;   // int w L_l^2
  double cross = 0.0;  // int w L_l L_r
  double right = 0.0;  // int w L_r^2
};

// Integrates against the linear basis on [lo, hi]. `smooth(x)` is the weight divided by the
// singular factor; `dist(x)` is the distance to the singular endpoint (unused when regular).
template <class Smooth>
ElementIntegrals integrate(const QuadratureRule& rule, double lo, double hi, Smooth smooth) {
  ElementIntegrals out;
  const double d = hi - lo;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double x = rule.nodes[q];
    const double w = rule.weights[q] * smooth(x);
    const double ll = (hi - x) / d;
    const double lr = (x - lo) / d;
    out.w0 += w;
    out.left += w * ll * ll;
    out.cross += w * ll * lr;
    out.right += w * lr * lr;
  }
  return out;
}

}  // namespace

AngularSpectrum solve_angular(int n_dim, double s, int n_cells, int count) {
  if (n_dim < 1) throw ParameterError("solve_angular: n_dim must be positive");
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("solve_angular: requires 0 < s < 1");
  if (n_cells < 4) throw ParameterError("solve_angular: n_cells must be at least 4");
  if (count < 1 || count > n_cells + 1) throw ParameterError("solve_angular: bad count");

  const double a = 1.0 - 2.0 * s;
  const bool circle = (n_dim == 1);
  const double lo = circle ? -kHalfPi : 0.0;
  const double hi = kHalfPi;
  const double h = (hi - lo) / n_cells;
  const int n = n_cells + 1;
  const double pole_power = static_cast<double>(n_dim - 1);

  Eigen::VectorXd nodes(n);
  for (int i = 0; i < n; ++i) nodes(i) = (i == n_cells) ? hi : lo + i * h;

  // Distance to the nearest equator point; cos phi = sin(dist) for N = 1.
  auto equator_dist = [&](double x) {
    return circle ? std::min(x + kHalfPi, kHalfPi - x) : kHalfPi - x;
  };
  auto weight = [&](double x) {
    const double tau = equator_dist(x);
    double w = std::pow(std::sin(tau), a);
    if (!circle) w *= std::pow(std::sin(x), pole_power);
    return w;
  };

  Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  const QuadratureRule ref_legendre = gauss_jacobi(kQuadPoints, 0.0, 0.0);
  const QuadratureRule ref_jacobi = gauss_jacobi(kQuadPoints, 0.0, a);

  for (int e = 0; e < n_cells; ++e) {
    const double x0 = nodes(e);
    const double x1 = nodes(e + 1);
    const double half = 0.5 * (x1 - x0);
    ElementIntegrals ei;
    const bool left_equator = circle && e == 0;
    const bool right_equator = e == n_cells - 1;
    if (left_equator || right_equator) {
      // Weight tau^a on [0, d] where tau is the distance to the equator endpoint.
      QuadratureRule rule = ref_jacobi;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double tau = half * (ref_jacobi.nodes[q] + 1.0);
        rule.nodes[q] = left_equator ? x0 + tau : x1 - tau;
        rule.weights[q] = ref_jacobi.weights[q] * std::pow(half, a + 1.0);
      }
      ei = integrate(rule, x0, x1, [&](double x) {
        const double tau = equator_dist(x);
        double w = sinc_power(tau, a);
        if (!circle) w *= std::pow(std::sin(x), pole_power);
        return w;
      });
    } else {
      QuadratureRule rule = ref_legendre;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        rule.nodes[q] = x0 + half * (ref_legendre.nodes[q] + 1.0);
        rule.weights[q] = ref_legendre.weights[q] * half;
      }
      ei = integrate(rule, x0, x1, weight);
    }
    const double d2 = (x1 - x0) * (x1 - x0);
    stiff(e, e) += ei.w0 / d2;
    stiff(e + 1, e + 1) += ei.w0 / d2;
    stiff(e, e + 1) -= ei.w0 / d2;
    stiff(e + 1, e) -= ei.w0 / d2;
    mass(e, e) += ei.left;
    mass(e + 1, e + 1) += ei.right;
    mass(e, e + 1) += ei.cross;
    mass(e + 1, e) += ei.cross;
  }

  const EigenPairs pairs = solve_generalized(stiff, mass, count);
  AngularSpectrum out;
  out.n_dim = n_dim;
  out.s = s;
  out.mu = pairs.values;
  out.vectors = pairs.vectors;
  out.nodes = nodes;
  for (int k = 0; k < count; ++k) {
    out.trace_plus.push_back(pairs.vectors(n - 1, k));
    out.trace_minus.push_back(circle ? pairs.vectors(0, k) : pairs.vectors(n - 1, k));
  }
  return out;
}

double gamma_exponent(int n_dim, double s, double mu) {
  if (!(mu >= 0.0)) {
    std::ostringstream msg;
    msg << "gamma_exponent: mu must be nonnegative (got " << mu << ")";
    throw DomainError(msg.str());
  }
  const double half = (n_dim - 2.0 * s) / 2.0;
  const double root = std::sqrt(half * half + mu);
  // mu / (half + root) equals -half + root without cancellation for small mu.
  return half + root > 0.0 ? mu / (half + root) : -half + root;
}

Profile::Profile(double gamma, double psi_plus, double psi_minus)
    : gamma_(gamma), psi_plus_(psi_plus), psi_minus_(psi_minus) {}

double Profile::operator()(double x) const {
  return std::pow(std::abs(x), gamma_) * (x > 0.0 ? psi_plus_ : psi_minus_);
}

Profile hat_psi(double gamma, double psi_plus, double psi_minus) {
  if (!(gamma >= 0.0)) throw DomainError("hat_psi: gamma must be nonnegative");
  if (psi_plus == 0.0 && psi_minus == 0.0) {
    throw DomainError("hat_psi: both trace values vanish; the profile must not be identically zero");
  }
  return Profile(gamma, psi_plus, psi_minus);
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace

VanishingFit vanishing_order_fit(const Eigen::VectorXd& u, const Grid& grid, double r_lo,
                                 double r_hi) {
  if (u.size() != grid.interior_count()) {
    throw DomainError("vanishing_order_fit: vector length must equal the interior node count");
  }
  if (!(grid.x_min() < 0.0 && grid.x_max() > 0.0)) {
    throw DomainError("vanishing_order_fit: 0 must lie strictly inside the grid");
  }
  const double dist = std::min(-grid.x_min(), grid.x_max());
  if (!(r_lo > 2.0 * grid.h()) || !(r_hi < dist / 2.0) || !(r_lo < r_hi)) {
    std::ostringstream msg;
    msg << "vanishing_order_fit: window [" << r_lo << ", " << r_hi << "] must lie inside ("
        << 2.0 * grid.h() << ", " << dist / 2.0 << ")";
    throw DomainError(msg.str());
  }

  std::vector<double> lx[2];
  std::vector<double> ly[2];
  double sign[2] = {0.0, 0.0};
  for (int p = 0; p < grid.interior_count(); ++p) {
    const double x = grid.interior_node(p);
    const double r = std::abs(x);
    if (r < r_lo || r > r_hi || u(p) == 0.0) continue;
    const int side = x > 0.0 ? 0 : 1;
    lx[side].push_back(std::log(r));
    ly[side].push_back(std::log(std::abs(u(p))));
    sign[side] += u(p) > 0.0 ? 1.0 : -1.0;
  }
  for (int side = 0; side < 2; ++side) {
    if (lx[side].size() < 4) {
      throw DomainError("vanishing_order_fit: fewer than 4 nodes on one side of the window");
    }
  }
  const LineFit plus = least_squares(lx[0], ly[0]);
  const LineFit minus = least_squares(lx[1], ly[1]);

  VanishingFit out;
  out.slope_plus = plus.slope;
  out.slope_minus = minus.slope;
  out.gamma_est = 0.5 * (plus.slope + minus.slope);
  out.amp_plus = (sign[0] >= 0.0 ? 1.0 : -1.0) * std::exp(plus.intercept);
  out.amp_minus = (sign[1] >= 0.0 ? 1.0 : -1.0) * std::exp(minus.intercept);
  out.r_squared = std::min(plus.r_squared, minus.r_squared);
  return out;
}

ProfileEstimate estimate_profile(const Eigen::VectorXd& u, const Grid& grid,
                                 const AngularSpectrum& spectrum, double r_lo, double r_hi) {
  ProfileEstimate out;
  out.fit = vanishing_order_fit(u, grid, r_lo, r_hi);
  double best = INFINITY;
  double gamma = 0.0;
  for (Eigen::Index k = 0; k < spectrum.mu.size(); ++k) {
    // mu_1 = 0 exactly; the computed value carries rounding noise.
    const double g = k == 0 ? 0.0 : gamma_exponent(spectrum.n_dim, spectrum.s, spectrum.mu(k));
    if (std::abs(g - out.fit.gamma_est) < best) {
      best = std::abs(g - out.fit.gamma_est);
      gamma = g;
      out.angular_index = static_cast<int>(k) + 1;
    }
  }

  // Nearest nodes to the origin on each side.
  const double pos = -grid.x_min() / grid.h();
  const int left = static_cast<int>(std::floor(pos + 1e-9));
  const bool on_node = std::abs(pos - std::round(pos)) < 1e-9;
  auto value = [&](int node) { return u(node - 1); };
  double plus = 0.0;
  double minus = 0.0;
  if (gamma == 0.0) {
    if (on_node) {
      plus = minus = value(static_cast<int>(std::round(pos)));
    } else {
      const double w = pos - left;
      plus = minus = (1.0 - w) * value(left) + w * value(left + 1);
    }
  } else {
    const int lo = on_node ? static_cast<int>(std::round(pos)) - 1 : left;
    const int hi = on_node ? static_cast<int>(std::round(pos)) + 1 : left + 1;
    plus = value(hi) / std::pow(std::abs(grid.node(hi)), gamma);
    minus = value(lo) / std::pow(std::abs(grid.node(lo)), gamma);
  }
  out.profile = hat_psi(gamma, plus, minus);
  return out;
}

}  // namespace fraclab
