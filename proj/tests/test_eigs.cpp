#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

#include "doctest.h"
#include "fraclab/assembly.hpp"
#include "fraclab/eigs.hpp"
#include "fraclab/errors.hpp"
#include "test_support.hpp"

using namespace fraclab;

namespace {

struct Problem {
  Grid grid;
  FracParams params;
  StiffnessOperator a;
  MassOperator m;
  Problem(int n, double s)
      : grid(-1.0, 1.0, n), params(make_params(1, s)), a(grid, params), m(grid) {}
};

}  // namespace

TEST_CASE("generalized solve matches a dense reference") {
  const Problem pr(40, 0.25);
  const EigenPairs e = solve_eigs(pr.a, pr.m, pr.grid.all_interior(), 5);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ref(pr.a.dense(), pr.m.dense());
  for (int k = 0; k < 5; ++k) {
    CHECK(e.values(k) == doctest::Approx(ref.eigenvalues()(k)).epsilon(1e-12));
    CHECK(e.residuals(k) <= 1e-10);
  }
  for (int k = 1; k < 5; ++k) CHECK(e.values(k) > e.values(k - 1));
  const Eigen::MatrixXd gram = e.vectors.transpose() * pr.m.dense() * e.vectors;
  CHECK((gram - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("generalized solve with a dense mass matrix") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd b(30, 30);
  for (auto& v : b.reshaped()) v = u(rng);
  const Eigen::MatrixXd a = b * b.transpose() + Eigen::MatrixXd::Identity(30, 30);
  for (auto& v : b.reshaped()) v = u(rng);
  const Eigen::MatrixXd m = b * b.transpose() + 30.0 * Eigen::MatrixXd::Identity(30, 30);
  const EigenPairs e = solve_generalized(a, m, 4);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ref(a, m);
  for (int k = 0; k < 4; ++k) CHECK(e.values(k) == doctest::Approx(ref.eigenvalues()(k)).epsilon(1e-11));
}

TEST_CASE("sign convention") {
  Eigen::MatrixXd v(4, 2);
  v << 0.1, 0.5, -0.9, -0.5, 0.3, 0.2, 0.9, 0.1;
  fix_signs(v);
  CHECK(v(1, 0) == 0.9);
  CHECK(v(0, 1) == 0.5);
  const Problem pr(64, 0.3);
  const EigenPairs e = solve_eigs(pr.a, pr.m, pr.grid.all_interior(), 3);
  for (int k = 0; k < 3; ++k) {
    Eigen::Index idx;
    e.vectors.col(k).cwiseAbs().maxCoeff(&idx);
    CHECK(e.vectors(idx, k) > 0.0);
  }
  // The ground state does not change sign.
  CHECK(e.vectors.col(0).minCoeff() >= 0.0);
}

TEST_CASE("eigenvalue lower bound from the hardy constant") {
  for (double s : {0.25, 0.4}) {
    const Problem pr(200, s);
    const EigenPairs e = solve_eigs(pr.a, pr.m, pr.grid.all_interior(), 1);
    CHECK(e.values(0) >= pr.params.lambda_hardy / std::pow(2.0, 2.0 * s));
  }
}

TEST_CASE("removing nodes raises every eigenvalue") {
  const Problem pr(120, 0.25);
  const NodeSet all = pr.grid.all_interior();
  const NodeSet holes{50, 51, 52, 90};
  const NodeSet fewer = set_difference(all, holes);
  const EigenPairs full = solve_eigs(pr.a, pr.m, all, 4);
  const EigenPairs cut = solve_eigs(pr.a, pr.m, fewer, 4);
  for (int k = 0; k < 4; ++k) CHECK(cut.values(k) >= full.values(k) - 1e-10);
  for (int p : holes) CHECK(cut.vectors.row(p).norm() == 0.0);
}

TEST_CASE("rayleigh quotient") {
  const Problem pr(100, 0.25);
  const EigenPairs e = solve_eigs(pr.a, pr.m, pr.grid.all_interior(), 2);
  CHECK(rayleigh(pr.a, pr.m, e.vectors.col(0)) == doctest::Approx(e.values(0)).epsilon(1e-9));
  CHECK(rayleigh(pr.a, pr.m, e.vectors.col(1)) == doctest::Approx(e.values(1)).epsilon(1e-9));
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd x(pr.a.size());
    for (auto& v : x) v = normal(rng);
    CHECK(rayleigh(pr.a, pr.m, 7.0 * x) == doctest::Approx(rayleigh(pr.a, pr.m, x)).epsilon(1e-13));
    CHECK(rayleigh(pr.a, pr.m, x) >= e.values(0) - 1e-10);
  }
  CHECK_THROWS_AS(rayleigh(pr.a, pr.m, Eigen::VectorXd::Zero(pr.a.size())), DomainError);
}

TEST_CASE("two-dimensional minimax") {
  const Problem pr(100, 0.4);
  const EigenPairs e = solve_eigs(pr.a, pr.m, pr.grid.all_interior(), 2);
  const Eigen::MatrixXd& v = e.vectors;
  const Eigen::Matrix2d a = v.transpose() * pr.a.dense() * v;
  const Eigen::Matrix2d m = v.transpose() * pr.m.dense() * v;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> small(a, m);
  CHECK(small.eigenvalues()(1) == doctest::Approx(e.values(1)).epsilon(1e-9));
}

TEST_CASE("simple low spectrum") {
  for (double s : {0.25, 0.4}) {
    const Problem pr(400, s);
    const EigenPairs e = solve_eigs(pr.a, pr.m, pr.grid.all_interior(), 3);
    CHECK((e.values(1) - e.values(0)) / e.values(0) > 1e-3);
    CHECK((e.values(2) - e.values(1)) / e.values(1) > 1e-3);
  }
}

TEST_CASE("refinement behaviour of the ground state") {
  std::vector<double> lambda;
  std::vector<double> peak;
  for (int n : {200, 400, 800, 1600}) {
    const Problem pr(n, 0.25);
    const EigenPairs e = solve_eigs(pr.a, pr.m, pr.grid.all_interior(), 1);
    lambda.push_back(e.values(0));
    peak.push_back(e.vectors.col(0).cwiseAbs().maxCoeff());
  }
  const double d1 = std::abs(lambda[0] - lambda[1]);
  const double d2 = std::abs(lambda[1] - lambda[2]);
  const double d3 = std::abs(lambda[2] - lambda[3]);
  CHECK(d2 < d1);
  CHECK(d3 < d2);
  CHECK(std::abs(peak[3] / peak[2] - 1.0) <= 0.05);
}

TEST_CASE("argument validation") {
  const Problem pr(20, 0.25);
  CHECK_THROWS_AS(solve_eigs(pr.a, pr.m, NodeSet{}, 1), DomainError);
  CHECK_THROWS_AS(solve_eigs(pr.a, pr.m, NodeSet{0, 1}, 3), DomainError);
  CHECK_THROWS_AS(solve_eigs(pr.a, pr.m, NodeSet{0, 40}, 1), DomainError);
  Eigen::MatrixXd bad = -Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(solve_generalized(Eigen::MatrixXd::Identity(3, 3), bad, 1), NumericalError);
}
