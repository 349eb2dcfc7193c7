#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "fraclab/angular.hpp"
#include "fraclab/assembly.hpp"
#include "fraclab/asymptotics.hpp"
#include "fraclab/capacity.hpp"
#include "fraclab/eigs.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/extension.hpp"
#include "fraclab/params.hpp"

namespace py = pybind11;
using namespace fraclab;

namespace {

using Pairs = std::vector<std::pair<double, double>>;

std::vector<Interval> to_intervals(const Pairs& k) {
  std::vector<Interval> out;
  for (const auto& [lo, hi] : k) out.push_back({lo, hi});
  return out;
}

py::dict constants(int n_dim, double s) {
  const FracParams p = make_params(n_dim, s);
  py::dict d;
  d["n_dim"] = p.n_dim;
  d["s"] = p.s;
  d["c_ns"] = p.c_ns;
  d["kappa_s"] = p.kappa_s;
  d["lambda_hardy"] = p.lambda_hardy;
  d["two_star"] = p.two_star;
  return d;
}

py::dict eigenpairs(double s, double x_min, double x_max, int n_cells, int count, double tol) {
  const Grid g(x_min, x_max, n_cells);
  const StiffnessOperator a(g, make_params(1, s));
  const MassOperator m(g);
  EigOptions opts;
  opts.tolerance = tol;
  const EigenPairs e = solve_eigs(a, m, g.all_interior(), count, opts);
  std::vector<double> nodes;
  for (int p = 0; p < g.interior_count(); ++p) nodes.push_back(g.interior_node(p));
  py::dict d;
  d["values"] = e.values;
  d["vectors"] = e.vectors;
  d["residuals"] = e.residuals;
  d["nodes"] = nodes;
  return d;
}

py::dict capacity_dict(const CapacityResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["potential"] = r.potential;
  d["residual"] = r.residual;
  d["covers_all"] = r.covers_all;
  return d;
}

py::dict condenser(double s, double x_min, double x_max, int n_cells, const Pairs& k) {
  const Grid g(x_min, x_max, n_cells);
  const StiffnessOperator a(g, make_params(1, s));
  const auto iv = to_intervals(k);
  return capacity_dict(condenser_capacity(a, g.all_interior(), nodes_in_set(g, iv)));
}

py::dict ucap(double s, double x_min, double x_max, int n_cells, const Pairs& k, const Eigen::VectorXd& data) {
  const Grid g(x_min, x_max, n_cells);
  const StiffnessOperator a(g, make_params(1, s));
  const auto iv = to_intervals(k);
  return capacity_dict(u_capacity(a, g.all_interior(), nodes_in_set(g, iv), data));
}

py::dict angular(int n_dim, double s, int n_cells, int count) {
  const AngularSpectrum sp = solve_angular(n_dim, s, n_cells, count);
  py::dict d;
  d["mu"] = sp.mu;
  d["nodes"] = sp.nodes;
  d["vectors"] = sp.vectors;
  return d;
}

py::dict sweep(double s, int j, const Pairs& k, const std::vector<double>& eps, double x_min, double x_max,
               int n_cells) {
  SweepConfig c;
  c.s = s;
  c.j = j;
  c.k = to_intervals(k);
  c.eps = eps;
  c.x_min = x_min;
  c.x_max = x_max;
  c.n_cells = n_cells;
  const SweepTable t = run_sweep(c);
  std::map<std::string, std::vector<double>> cols;
  for (const SweepRow& r : t.rows) {
    cols["eps"].push_back(r.eps);
    cols["lambda0"].push_back(r.lambda0);
    cols["lambda_eps"].push_back(r.lambda_eps);
    cols["shift"].push_back(r.shift);
    cols["ucap"].push_back(r.ucap);
    cols["ratio"].push_back(r.ratio);
    cols["cap"].push_back(r.cap);
  }
  py::dict d;
  for (const char* name : {"eps", "lambda0", "lambda_eps", "shift", "ucap", "ratio", "cap"}) d[name] = cols[name];
  d["base_values"] = t.base_values;
  d["u_j"] = t.u_j;
  return d;
}

py::dict rate(const std::vector<double>& eps, const std::vector<double>& shift) {
  if (eps.size() != shift.size()) throw DomainError("fit_rate: eps and shift lengths differ");
  Pairs series;
  for (std::size_t i = 0; i < eps.size(); ++i) series.emplace_back(eps[i], shift[i]);
  const RateFit f = fit_rate(series);
  py::dict d;
  d["exponent"] = f.exponent;
  d["prefactor"] = f.prefactor();
  d["r_squared"] = f.r_squared;
  d["window"] = f.window;
  return d;
}

py::dict whole_line(const Pairs& k, double gamma, double psi_plus, double psi_minus,
                    const std::vector<double>& radii, int cells_per_unit, double s) {
  const auto iv = to_intervals(k);
  const ExtrapolationResult r =
      whole_line_u_capacity(iv, Profile(gamma, psi_plus, psi_minus), radii, cells_per_unit, make_params(1, s));
  py::dict d;
  d["radii"] = r.radii;
  d["values"] = r.values;
  d["last"] = r.last;
  d["relative_gap"] = r.relative_gap;
  return d;
}

py::dict extension_compare(double s, int n_cells, double t_height, int m_t, double beta, const Pairs& k, int count,
                           int trials, unsigned long long seed) {
  ExtensionSetup setup;
  setup.n_cells = n_cells;
  setup.T = t_height;
  setup.m_t = m_t;
  setup.beta = beta;
  const PathComparison r = compare_paths(s, -1.0, 1.0, setup, to_intervals(k), count, trials, seed);
  py::dict d;
  d["lambda_direct"] = r.lambda_direct;
  d["lambda_extension"] = r.lambda_extension;
  d["cap_direct"] = r.cap_direct;
  d["cap_extension"] = r.cap_extension;
  d["energy_ratio_min"] = r.energy_ratio_min;
  d["energy_ratio_max"] = r.energy_ratio_max;
  d["mesh_nodes"] = r.mesh_nodes;
  return d;
}

std::map<std::string, std::string> run_command(const std::string& command, const std::vector<std::string>& overrides) {
  const cli::RunConfig cfg = cli::parse_config(command, "", overrides);
  std::map<std::string, std::string> files;
  for (const auto& [name, content] : cli::execute(cfg).files) files[name] = content;
  return files;
}

}  // namespace

PYBIND11_MODULE(_fraclab, m) {
  m.doc() = "Restricted fractional Laplacian on intervals: eigenvalues, capacities, asymptotics";

  auto base = py::register_exception<Error>(m, "FraclabError", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<GeometryError>(m, "GeometryError", base.ptr());
  py::register_exception<ResolutionError>(m, "ResolutionError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  m.def("gamma", &gamma_fn, py::arg("x"));
  m.def("constants", &constants, py::arg("n_dim"), py::arg("s"));
  m.def(
      "toeplitz_entry",
      [](std::size_t k, double h, double s) { return toeplitz_entry(k, h, make_params(1, s)); },
      py::arg("k"), py::arg("h"), py::arg("s"));
  m.def("eigenpairs", &eigenpairs, py::arg("s"), py::arg("x_min") = -1.0, py::arg("x_max") = 1.0,
        py::arg("n_cells") = 400, py::arg("count") = 4, py::arg("tol") = 1e-10);
  m.def("condenser_capacity", &condenser, py::arg("s"), py::arg("x_min"), py::arg("x_max"), py::arg("n_cells"),
        py::arg("K"));
  m.def("u_capacity", &ucap, py::arg("s"), py::arg("x_min"), py::arg("x_max"), py::arg("n_cells"), py::arg("K"),
        py::arg("data"));
  m.def("angular_spectrum", &angular, py::arg("n_dim"), py::arg("s"), py::arg("n_cells") = 800,
        py::arg("count") = 4);
  m.def("gamma_exponent", &gamma_exponent, py::arg("n_dim"), py::arg("s"), py::arg("mu"));
  m.def("run_sweep", &sweep, py::arg("s"), py::arg("j"), py::arg("K"), py::arg("eps"), py::arg("x_min") = -1.0,
        py::arg("x_max") = 1.0, py::arg("n_cells") = 1600);
  m.def("fit_rate", &rate, py::arg("eps"), py::arg("shift"));
  m.def("whole_line_u_capacity", &whole_line, py::arg("K"), py::arg("gamma"), py::arg("psi_plus"),
        py::arg("psi_minus"), py::arg("radii"), py::arg("cells_per_unit"), py::arg("s"));
  m.def("extension_compare", &extension_compare, py::arg("s"), py::arg("n_cells") = 400, py::arg("T") = 32.0,
        py::arg("m_t") = 128, py::arg("beta") = 4.0, py::arg("K") = Pairs{{-0.25, 0.25}}, py::arg("count") = 1,
        py::arg("trials") = 50, py::arg("seed") = 42ULL);
  m.def("run_command", &run_command, py::arg("command"), py::arg("overrides") = std::vector<std::string>{},
        "Runs a CLI command in memory and returns {file name: content}.");
}
