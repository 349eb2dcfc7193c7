#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "fraclab/angular.hpp"
#include "fraclab/assembly.hpp"
#include "fraclab/capacity.hpp"
#include "fraclab/eigs.hpp"
#include "fraclab/errors.hpp"
#include "test_support.hpp"

using namespace fraclab;

namespace {

NodeMask mask_of(const Grid& g, double lo, double hi) {
  return nodes_in_set(g, std::vector<Interval>{{lo, hi}});
}

}  // namespace

TEST_CASE("empty K gives zero capacity") {
  const Grid g(-1.0, 1.0, 40);
  const StiffnessOperator a(g, make_params(1, 0.25));
  const CapacityResult r = condenser_capacity(a, g.all_interior(), NodeMask{});
  CHECK(r.value == 0.0);
  CHECK(r.potential.norm() == 0.0);
}

TEST_CASE("condenser potential properties") {
  for (double s : {0.25, 0.4}) {
    const Grid g(-1.0, 1.0, 200);
    const StiffnessOperator a(g, make_params(1, s));
    const CapacityResult r = condenser_capacity(a, g.all_interior(), mask_of(g, -0.3, 0.1));
    CHECK(r.value > 0.0);
    CHECK(r.value == doctest::Approx(a.form(r.potential)).epsilon(1e-12));
    CHECK(r.residual <= 1e-10 * a.generator()[0]);
    CHECK(r.potential.minCoeff() >= -1e-10);
    CHECK(r.potential.maxCoeff() <= 1.0 + 1e-10);
    CHECK_FALSE(r.covers_all);
  }
}

TEST_CASE("capacity is monotone in K") {
  const Grid g(-1.0, 1.0, 200);
  const StiffnessOperator a(g, make_params(1, 0.25));
  const double small = condenser_capacity(a, g.all_interior(), mask_of(g, -0.1, 0.1)).value;
  const double large = condenser_capacity(a, g.all_interior(), mask_of(g, -0.2, 0.15)).value;
  CHECK(small <= large);
}

TEST_CASE("point capacity rate at s = 1/4") {
  const Grid g(-1.0, 1.0, 800);
  const StiffnessOperator a(g, make_params(1, 0.25));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const std::vector<double> deltas{0.2, 0.1, 0.05, 0.025};
  for (double d : deltas) {
    const double c = condenser_capacity(a, g.all_interior(), mask_of(g, -d, d)).value;
    const double lx = std::log(d);
    const double ly = std::log(c);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(deltas.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(std::abs(slope - 0.5) <= 0.1);
}

TEST_CASE("u-capacity identities") {
  const Grid g(-1.0, 1.0, 160);
  const StiffnessOperator a(g, make_params(1, 0.25));
  const MassOperator m(g);
  const NodeMask k = mask_of(g, -0.2, 0.3);
  const NodeSet all = g.all_interior();
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(a.size());
  CHECK(u_capacity(a, all, k, one).value == condenser_capacity(a, all, k).value);

  const Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(a.size(), -1.0, 2.0);
  CHECK(u_capacity(a, all, k, 3.0 * u).value ==
        doctest::Approx(9.0 * u_capacity(a, all, k, u).value).epsilon(1e-12));

  const EigenPairs e = solve_eigs(a, m, all, 2);
  for (int j = 0; j < 2; ++j) {
    CHECK(u_capacity(a, all, k, e.vectors.col(j)).value <= e.values(j) + 1e-9);
  }
}

TEST_CASE("u-capacity is below an explicit competitor") {
  const Grid g(-1.0, 1.0, 160);
  const StiffnessOperator a(g, make_params(1, 0.3));
  const NodeMask k = mask_of(g, -0.1, 0.1);
  Eigen::VectorXd u(a.size());
  Eigen::VectorXd competitor(a.size());
  for (int p = 0; p < a.size(); ++p) {
    const double x = g.interior_node(p);
    u(p) = std::cos(1.3 * x) + x;
    const double cut = std::clamp((0.5 - std::abs(x)) / 0.4, 0.0, 1.0);
    competitor(p) = cut * u(p);
  }
  const CapacityResult r = u_capacity(a, g.all_interior(), k, u);
  CHECK(r.value <= a.form(competitor));
  for (int p : k.indices) CHECK(r.potential(p) == u(p));
}

TEST_CASE("capacity restricted to a subregion") {
  const Grid g(-1.0, 1.0, 100);
  const StiffnessOperator a(g, make_params(1, 0.25));
  const NodeSet sub = mask_of(g, -0.5, 0.5).indices;
  const NodeMask k = mask_of(g, -0.1, 0.1);
  const CapacityResult inner = condenser_capacity(a, sub, k);
  const CapacityResult outer = condenser_capacity(a, g.all_interior(), k);
  CHECK(inner.value >= outer.value);
  for (int p = 0; p < a.size(); ++p) {
    if (!std::binary_search(sub.begin(), sub.end(), p)) CHECK(inner.potential(p) == 0.0);
  }
  CHECK_THROWS_AS(condenser_capacity(a, sub, mask_of(g, 0.4, 0.7)), DomainError);
}

TEST_CASE("K covering every node") {
  const Grid g(-1.0, 1.0, 10);
  const StiffnessOperator a(g, make_params(1, 0.25));
  const CapacityResult r = condenser_capacity(a, g.all_interior(), mask_of(g, -0.95, 0.95));
  CHECK(r.covers_all);
  CHECK(r.value == doctest::Approx(a.form(Eigen::VectorXd::Ones(a.size()))));
}

TEST_CASE("whole-line capacity sequence") {
  const FracParams p = make_params(1, 0.25);
  const std::vector<Interval> k{{-1.0, 1.0}};
  const std::vector<double> radii{2.0, 4.0, 8.0};
  const ExtrapolationResult r = whole_line_u_capacity(k, [](double) { return 1.0; }, radii, 8, p);
  REQUIRE(r.values.size() == 3);
  CHECK(r.values[1] <= r.values[0]);
  CHECK(r.values[2] <= r.values[1]);
  CHECK(r.last == r.values[2]);
  CHECK(r.cauchy_gap == doctest::Approx(r.values[1] - r.values[2]));

  const ExtrapolationResult zero = whole_line_u_capacity(k, [](double) { return 0.0; }, radii, 8, p);
  for (double v : zero.values) CHECK(v == 0.0);

  const Profile constant = hat_psi(0.0, 2.0, 2.0);
  const ExtrapolationResult scaled = whole_line_u_capacity(k, constant, radii, 8, p);
  CHECK(scaled.last == doctest::Approx(4.0 * r.last).epsilon(1e-12));

  const std::vector<double> bad{4.0, 2.0};
  CHECK_THROWS_AS(whole_line_u_capacity(k, [](double) { return 1.0; }, bad, 8, p), DomainError);
}
