#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "fraclab/params.hpp"

namespace fraclab::testing {

// Autocorrelation of the unit hat: int phi(x) phi(x + d) dx.
inline double hat_autocorrelation(double d) {
  d = std::abs(d);
  if (d <= 1.0) return 2.0 / 3.0 - d * d + 0.5 * d * d * d;
  if (d <= 2.0) return (2.0 - d) * (2.0 - d) * (2.0 - d) / 6.0;
  return 0.0;
}

// 2 A(k) - A(k + r) - A(k - r) for 0 <= r <= 1 and integer 0 <= k <= 2, written without
// cancellation: both arguments stay on single cubic pieces, so only the r^2 and r^3 terms remain.
inline double second_difference_near_zero(int k, double r) {
  static constexpr double curvature[3] = {-2.0, 1.0, 0.0};
  static constexpr double third_jump[3] = {6.0, -4.0, 1.0};
  return -curvature[k] * r * r - third_jump[k] / 6.0 * r * r * r;
}

// (phi_0, phi_k) at unit spacing by adaptive Gauss-Kronrod on the radial form
//   C(1,s) int_0^inf r^{-1-2s} (2 A(k) - A(k + r) - A(k - r)) dr,
// split at the kinks of A and mapped by r = u^{1/(1-s)} near the origin.
inline double generator_by_quadrature(int k, double s) {
  using boost::math::quadrature::gauss_kronrod;
  const double c = make_params(1, s).c_ns;
  const double a_k = hat_autocorrelation(k);
  auto integrand = [&](double r) {
    return std::pow(r, -1.0 - 2.0 * s) *
           (2.0 * a_k - hat_autocorrelation(k + r) - hat_autocorrelation(k - r));
  };
  std::set<double> cuts{0.0};
  for (int off = -2; off <= 2; ++off) cuts.insert(std::abs(static_cast<double>(k + off)));
  const double last = *cuts.rbegin();

  double total = 0.0;
  for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
    const double lo = *it;
    const double hi = *std::next(it);
    if (lo == 0.0) {
      const double p = 1.0 / (1.0 - s);
      auto mapped = [&](double u) {
        if (u == 0.0) return 0.0;
        const double r = std::pow(u, p);
        const double d = k <= 2 ? second_difference_near_zero(k, r)
                                : 2.0 * a_k - hat_autocorrelation(k + r) - hat_autocorrelation(k - r);
        return std::pow(r, -1.0 - 2.0 * s) * d * p * std::pow(u, p - 1.0);
      };
      total += gauss_kronrod<double, 61>::integrate(mapped, 0.0, std::pow(hi, 1.0 / p), 20, 1e-14);
    } else {
      total += gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 20, 1e-14);
    }
  }
  // Beyond the last kink only 2 A(k) r^{-1-2s} survives.
  total += 2.0 * a_k * std::pow(last, -2.0 * s) / (2.0 * s);
  return c * total;
}

}  // namespace fraclab::testing
