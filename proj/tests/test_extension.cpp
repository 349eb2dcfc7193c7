#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

#include "doctest.h"
#include "fraclab/assembly.hpp"
#include "fraclab/capacity.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/extension.hpp"
#include "test_support.hpp"

using namespace fraclab;

TEST_CASE("graded layers") {
  const Grid g(-1.0, 1.0, 8);
  const ExtMesh mesh = build_extension_mesh(g, 2.0, 4, 2.0);
  REQUIRE(mesh.nt() == 5);
  const double expect[5] = {0.0, 0.125, 0.5, 1.125, 2.0};
  for (int j = 0; j < 5; ++j) CHECK(mesh.t(j) == doctest::Approx(expect[j]).epsilon(1e-15));
  const ExtMesh uniform = build_extension_mesh(g, 2.0, 8, 1.0);
  for (int j = 1; j < uniform.nt(); ++j) {
    CHECK(uniform.t(j) - uniform.t(j - 1) == doctest::Approx(0.25).epsilon(1e-14));
  }
  CHECK_THROWS_AS(build_extension_mesh(g, 2.0, 2, 2.0), ParameterError);
  CHECK_THROWS_AS(build_extension_mesh(g, 2.0, 8, 0.5), ParameterError);
  CHECK_THROWS_AS(build_extension_mesh(g, -1.0, 8, 2.0), ParameterError);
}

TEST_CASE("lateral padding keeps the grid nodes") {
  const Grid g(-1.0, 1.0, 20);
  const ExtMesh mesh = build_extension_mesh(g, 3.0, 8, 2.0);
  CHECK(mesh.x(0) == doctest::Approx(-4.0));
  CHECK(mesh.x(mesh.nx() - 1) == doctest::Approx(4.0));
  for (int p = 0; p < g.interior_count(); ++p) {
    CHECK(mesh.x(mesh.trace_x_index(p)) == doctest::Approx(g.interior_node(p)).epsilon(1e-14));
  }
  for (int i = 1; i < mesh.nx(); ++i) CHECK(mesh.x(i) > mesh.x(i - 1));
  LateralPadding none;
  none.width = 0.0;
  CHECK(build_extension_mesh(g, 3.0, 8, 2.0, none).nx() == 21);
}

TEST_CASE("unit weight at s = 1/2 gives the bilinear laplacian") {
  const Grid g(-1.0, 1.0, 4);
  LateralPadding none;
  none.width = 0.0;
  const ExtOperator op = assemble_extension(build_extension_mesh(g, 1.0, 4, 1.0, none), make_params(1, 0.5 - 1e-12));
  // Q1 stiffness on a uniform hx = 0.5, ht = 0.25 mesh.
  const double hx = 0.5;
  const double ht = 0.25;
  const int c = op.mesh().index(2, 2);
  const auto& q = op.matrix();
  CHECK(q.coeff(c, c) == doctest::Approx(4.0 / 3.0 * (ht / hx + hx / ht)).epsilon(1e-9));
  CHECK(q.coeff(c, op.mesh().index(3, 2)) == doctest::Approx(-2.0 / 3.0 * ht / hx + hx / ht / 3.0).epsilon(1e-9));
  CHECK(q.coeff(c, op.mesh().index(3, 3)) == doctest::Approx(-(ht / hx + hx / ht) / 6.0).epsilon(1e-9));
}

TEST_CASE("form locality and positivity") {
  const Grid g(-1.0, 1.0, 10);
  const FracParams p = make_params(1, 0.25);
  const ExtOperator small = assemble_extension(build_extension_mesh(g, 2.0, 8, 1.0), p);
  const ExtOperator tall = assemble_extension(build_extension_mesh(g, 4.0, 16, 1.0), p);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(small.mesh().nx() * small.mesh().nt());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(tall.mesh().nx() * tall.mesh().nt());
  // Bump below t = 1 away from the lateral padding change.
  for (int j = 0; j <= 3; ++j) {
    for (int i = 4; i <= 6; ++i) {
      const double val = 1.0 + 0.1 * i - 0.2 * j;
      u(small.mesh().index(small.mesh().trace_x_index(i), j)) = val;
      v(tall.mesh().index(tall.mesh().trace_x_index(i), j)) = val;
    }
  }
  CHECK(small.form(u) > 0.0);
  CHECK(tall.form(v) == doctest::Approx(small.form(u)).epsilon(1e-12));

  Eigen::VectorXd w = Eigen::VectorXd::Zero(u.size());
  w(small.mesh().index(small.mesh().trace_x_index(3), 2)) = 1.0;
  CHECK(small.form(w) > 0.0);
}

TEST_CASE("fast and sparse schur complements agree") {
  const Grid g(-1.0, 1.0, 24);
  for (double s : {0.25, 0.4}) {
    const ExtOperator op = assemble_extension(build_extension_mesh(g, 4.0, 16, 2.0), make_params(1, s));
    const TraceOperator fast = dtn_schur(op);
    const TraceOperator sparse = dtn_schur_sparse(op);
    CHECK((fast.s - sparse.s).norm() <= 1e-10 * sparse.s.norm());
    CHECK((fast.s - fast.s.transpose()).norm() <= 1e-12 * fast.s.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fast.s);
    CHECK(es.eigenvalues()(0) > 0.0);
  }
}

TEST_CASE("schur energy is below an explicit extension") {
  const Grid g(-1.0, 1.0, 30);
  const ExtOperator op = assemble_extension(build_extension_mesh(g, 4.0, 24, 2.0), make_params(1, 0.3));
  const TraceOperator st = dtn_schur(op);
  const ExtMesh& mesh = op.mesh();
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd x(g.interior_count());
    for (auto& v : x) v = unif(rng);
    Eigen::VectorXd ext = Eigen::VectorXd::Zero(mesh.nx() * mesh.nt());
    for (int j = 0; j < mesh.nt(); ++j) {
      const double decay = std::max(0.0, 1.0 - mesh.t(j) / 0.5);
      for (int p = 0; p < g.interior_count(); ++p) ext(mesh.index(mesh.trace_x_index(p), j)) = decay * x(p);
    }
    CHECK(x.dot(st.s * x) <= op.form(ext));
    CHECK(x.dot(st.s * x) <= op.form(embed_trace(mesh, x)) * (1.0 + 1e-12));
  }
}

TEST_CASE("extension eigenvalues and capacities") {
  const Grid g(-1.0, 1.0, 40);
  const FracParams p = make_params(1, 0.25);
  const MassOperator m(g);
  const ExtOperator coarse = assemble_extension(build_extension_mesh(g, 4.0, 32, 3.0), p);
  const ExtOperator finer = assemble_extension(build_extension_mesh(g, 8.0, 64, 3.0), p);
  const EigenPairs a = extension_eigs(dtn_schur(coarse), m, p, 3);
  const EigenPairs b = extension_eigs(dtn_schur(finer), m, p, 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(a.values(k) > 0.0);
    CHECK(b.values(k) <= a.values(k));
  }
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(g.interior_count());
  const NodeMask small = nodes_in_set(g, std::vector<Interval>{{-0.1, 0.1}});
  const NodeMask large = nodes_in_set(g, std::vector<Interval>{{-0.3, 0.2}});
  CHECK(extension_capacity(coarse, NodeMask{}, one) == 0.0);
  CHECK(extension_capacity(coarse, small, Eigen::VectorXd::Zero(g.interior_count())) == 0.0);
  const double cs = extension_capacity(coarse, small, one);
  CHECK(cs > 0.0);
  CHECK(cs <= extension_capacity(coarse, large, one));

  // The capacity equals the trace Schur minimum with K fixed.
  const TraceOperator st = dtn_schur(coarse);
  const CapacityResult via_trace = constrained_minimum(st.s, g.all_interior(), small.indices, one);
  CHECK(cs == doctest::Approx(via_trace.value / p.kappa_s).epsilon(1e-9));
}

TEST_CASE("half-space hardy inequality on random fields") {
  const Grid g(-1.0, 1.0, 40);
  for (double s : {0.25, 0.4}) {
    const ExtOperator op = assemble_extension(build_extension_mesh(g, 2.0, 16, 2.0), make_params(1, s));
    const ExtMesh& mesh = op.mesh();
    const int origin = mesh.trace_x_index(g.interior_count() / 2);
    REQUIRE(std::abs(mesh.x(origin)) < 1e-12);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd u = Eigen::VectorXd::Zero(mesh.nx() * mesh.nt());
      for (int j = 0; j < mesh.nt(); ++j) {
        for (int i = 0; i < mesh.nx(); ++i) {
          if (op.is_dirichlet(i, j)) continue;
          if (j <= 1 && std::abs(i - origin) <= 1) continue;
          u(mesh.index(i, j)) = unif(rng);
        }
      }
      const HalfspaceHardyTerms h = halfspace_hardy_terms(op, u);
      CHECK(h.lhs > 0.0);
      CHECK(h.lhs <= (1.0 + 1e-3) * h.rhs);
    }
    Eigen::VectorXd bad = Eigen::VectorXd::Zero(mesh.nx() * mesh.nt());
    bad(mesh.index(origin, 0)) = 1.0;
    CHECK_THROWS_AS(halfspace_hardy_terms(op, bad), DomainError);
  }
}

TEST_CASE("extension requires 0 < s < 1") {
  const Grid g(-1.0, 1.0, 8);
  FracParams p = make_params(1, 0.25);
  p.s = 1.0;
  CHECK_THROWS_AS(assemble_extension(build_extension_mesh(g, 2.0, 8, 2.0), p), ParameterError);
}
