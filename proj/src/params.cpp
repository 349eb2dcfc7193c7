#include "fraclab/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fraclab/errors.hpp"

namespace fraclab {

double gamma_fn(double x) {
  if (x <= 0.0 && x == std::floor(x)) {
    std::ostringstream msg;
    msg << "gamma: pole at x = " << x;
    throw DomainError(msg.str());
  }
  return std::tgamma(x);
}

FracParams make_params(int n_dim, double s) {
  if (n_dim < 1) {
    throw ParameterError("n_dim must be a positive integer");
  }
  const double n = static_cast<double>(n_dim);
  const double upper = std::min(1.0, n / 2.0);
  if (!(s > 0.0)) {
    throw ParameterError("s must satisfy s > 0");
  }
  if (!(s < upper)) {
    std::ostringstream msg;
    msg << "s must satisfy s < min(1, N/2) = " << upper << " (got N=" << n_dim
        << ", s=" << s << ")";
    throw ParameterError(msg.str());
  }

  constexpr double pi = std::numbers::pi;
  FracParams p;
  p.n_dim = n_dim;
  p.s = s;
  p.c_ns = std::pow(pi, -n / 2.0) * std::pow(2.0, 2.0 * s) *
           gamma_fn((n + 2.0 * s) / 2.0) / gamma_fn(2.0 - s) * s * (1.0 - s);
  p.kappa_s = gamma_fn(1.0 - s) / (std::pow(2.0, 2.0 * s - 1.0) * gamma_fn(s));
  const double ratio = gamma_fn((n + 2.0 * s) / 4.0) / gamma_fn((n - 2.0 * s) / 4.0);
  p.lambda_hardy = std::pow(2.0, 2.0 * s) * ratio * ratio;
  p.two_star = 2.0 * n / (n - 2.0 * s);
  return p;
}

}  // namespace fraclab
