#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fraclab/errors.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/params.hpp"
#include "test_support.hpp"

using namespace fraclab;
using fraclab::testing::num;
using fraclab::testing::read_table;
using fraclab::testing::rel_err;

TEST_CASE("gamma matches tabulated high-precision values") {
  const auto rows = read_table("gamma_reference.csv");
  REQUIRE(rows.size() == 20);
  for (const auto& row : rows) {
    const double x = num(row, "x");
    CAPTURE(x);
    CHECK(rel_err(gamma_fn(x), num(row, "gamma")) < 1e-13);
  }
}

TEST_CASE("gamma rejects poles") {
  CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
  CHECK_THROWS_AS(gamma_fn(-2.0), DomainError);
}

TEST_CASE("constants match the gamma oracle") {
  for (const auto& row : read_table("constants_reference.csv")) {
    const int n = std::stoi(row.at("n_dim"));
    const double s = num(row, "s");
    CAPTURE(n);
    CAPTURE(s);
    const FracParams p = make_params(n, s);
    CHECK(rel_err(p.c_ns, num(row, "c_ns")) < 1e-12);
    CHECK(rel_err(p.kappa_s, num(row, "kappa_s")) < 1e-12);
    CHECK(rel_err(p.lambda_hardy, num(row, "lambda_hardy")) < 1e-12);
    CHECK(rel_err(p.two_star, num(row, "two_star")) < 1e-14);
    CHECK(p.c_ns > 0.0);
    CHECK(p.kappa_s > 0.0);
    CHECK(p.lambda_hardy > 0.0);
    CHECK(p.two_star > 2.0);
  }
}

TEST_CASE("closed forms at s = 1/4") {
  const FracParams p = make_params(1, 0.25);
  const double pi = std::numbers::pi;
  CHECK(rel_err(p.c_ns, std::sqrt(2.0) / (4.0 * std::sqrt(pi))) < 1e-14);
  CHECK(rel_err(p.kappa_s, 2.0 * pi / std::pow(std::tgamma(0.25), 2)) < 1e-14);
  CHECK(p.two_star == 4.0);
  CHECK(p.lambda_hardy == doctest::Approx(0.140).epsilon(1e-3));
}

TEST_CASE("c_ns vanishes at both ends of the order range") {
  CHECK(make_params(1, 1e-3).c_ns < 1e-3);
  CHECK(make_params(3, 0.999).c_ns < 1e-2);
  CHECK(make_params(3, 0.999).c_ns < make_params(3, 0.9).c_ns);
}

TEST_CASE("make_params is deterministic") {
  const FracParams a = make_params(1, 0.3);
  const FracParams b = make_params(1, 0.3);
  CHECK(a.c_ns == b.c_ns);
  CHECK(a.kappa_s == b.kappa_s);
  CHECK(a.lambda_hardy == b.lambda_hardy);
}

TEST_CASE("make_params rejects orders outside (0, min(1, N/2))") {
  CHECK_THROWS_AS(make_params(1, 0.5), ParameterError);
  CHECK_THROWS_AS(make_params(1, 0.0), ParameterError);
  CHECK_THROWS_AS(make_params(3, 1.0), ParameterError);
  CHECK_THROWS_AS(make_params(0, 0.2), ParameterError);
  try {
    make_params(1, 0.6);
    FAIL("expected an exception");
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("s < min(1, N/2)") != std::string::npos);
  }
}

TEST_CASE("grid arithmetic") {
  const Grid g = build_grid(-1.0, 1.0, 8);
  CHECK(g.h() == 0.25);
  CHECK(g.nodes().size() == 9);
  CHECK(g.interior_count() == 7);
  CHECK(g.interior_node(0) == -0.75);
  CHECK(build_grid(-1.0, 1.0, 1600).h() == doctest::Approx(0.00125).epsilon(1e-15));
  const auto nodes = build_grid(-3.0, 2.0, 50).nodes();
  for (std::size_t i = 1; i < nodes.size(); ++i) CHECK(nodes[i] > nodes[i - 1]);
}

TEST_CASE("grid construction errors") {
  CHECK_THROWS_AS(build_grid(1.0, -1.0, 8), GeometryError);
  CHECK_THROWS_AS(build_grid(0.0, 0.0, 8), GeometryError);
  CHECK_THROWS_AS(build_grid(-1.0, 1.0, 1), GeometryError);
}

TEST_CASE("node masks") {
  const Grid g(-1.0, 1.0, 40);
  const std::vector<Interval> k{{-0.1, 0.1}};
  const NodeMask mask = nodes_in_set(g, k);
  REQUIRE(mask.indices.size() == 5);
  const std::vector<double> expect{-0.1, -0.05, 0.0, 0.05, 0.1};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(g.interior_node(mask.indices[i]) == doctest::Approx(expect[i]).epsilon(1e-12));
  }
  CHECK(nodes_in_set(g, std::vector<Interval>{}).empty());

  const Grid coarse(-1.0, 1.0, 8);
  CHECK_THROWS_AS(nodes_in_set(coarse, std::vector<Interval>{{0.01, 0.02}}), ResolutionError);
  CHECK_THROWS_AS(nodes_in_set(g, std::vector<Interval>{{-1.0, 0.0}}), GeometryError);
  CHECK_THROWS_AS(nodes_in_set(g, std::vector<Interval>{{0.5, 1.2}}), GeometryError);
  CHECK_THROWS_AS(nodes_in_set(g, std::vector<Interval>{{-0.5, 0.1}, {0.0, 0.3}}), GeometryError);
}

TEST_CASE("mask of a disjoint union is the union of masks") {
  const Grid g(-1.0, 1.0, 64);
  const Interval a{-0.7, -0.2};
  const Interval b{0.1, 0.45};
  const NodeMask ma = nodes_in_set(g, std::vector<Interval>{a});
  const NodeMask mb = nodes_in_set(g, std::vector<Interval>{b});
  const NodeMask mab = nodes_in_set(g, std::vector<Interval>{b, a});
  NodeSet joined = ma.indices;
  joined.insert(joined.end(), mb.indices.begin(), mb.indices.end());
  CHECK(mab.indices == joined);
  CHECK(set_difference(mab.indices, mb.indices) == ma.indices);
}

TEST_CASE("scaled intervals") {
  const std::vector<Interval> k{{-1.0, 0.5}};
  const auto s = scaled(k, 0.1);
  CHECK(s[0].lo == doctest::Approx(-0.1));
  CHECK(s[0].hi == doctest::Approx(0.05));
}
