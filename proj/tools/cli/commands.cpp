#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclab/angular.hpp"
#include "fraclab/assembly.hpp"
#include "fraclab/asymptotics.hpp"
#include "fraclab/capacity.hpp"
#include "fraclab/eigs.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/extension.hpp"
#include "fraclab/params.hpp"

namespace fraclab::cli {
namespace {

Json constants_json(const FracParams& p) {
  Json c = Json::object();
  c["n_dim"] = p.n_dim;
  c["s"] = p.s;
  c["c_ns"] = p.c_ns;
  c["kappa_s"] = p.kappa_s;
  c["lambda_hardy"] = p.lambda_hardy;
  c["two_star"] = p.two_star;
  return c;
}

Json verdict_json(const Verdict& v) {
  Json j = Json::object();
  j["name"] = v.name;
  j["pass"] = v.pass;
  j["detail"] = v.detail;
  j["sequence"] = v.sequence;
  return j;
}

Verdict make_verdict(std::string name, bool pass, std::string detail, std::vector<double> seq = {}) {
  Verdict v;
  v.name = std::move(name);
  v.pass = pass;
  v.detail = std::move(detail);
  v.sequence = std::move(seq);
  return v;
}

Json header(const RunConfig& cfg) {
  Json j = Json::object();
  j["command"] = cfg.command;
  j["version"] = FRACLAB_VERSION;
  j["seed"] = cfg.integer("seed");
  j["config"] = cfg.values;
  const int n_dim = cfg.integer("n_dim");
  const double s = cfg.real("s");
  // The angular problem is posed for every s in (0, 1); whole-space constants need s < N/2.
  j["constants"] = 2.0 * s < n_dim ? constants_json(make_params(n_dim, s)) : Json();
  return j;
}

struct Output {
  Json json;
  CsvTable csv;
  std::vector<Verdict> verdicts;
};

ReportBundle finish(const RunConfig& cfg, Output out) {
  Json verdicts = Json::array();
  for (const Verdict& v : out.verdicts) verdicts.push_back(verdict_json(v));
  out.json["verdicts"] = verdicts;
  ReportBundle bundle;
  bundle.files.emplace_back(cfg.command + ".csv", out.csv.str());
  bundle.files.emplace_back(cfg.command + ".json", out.json.dump(2) + "\n");
  return bundle;
}

Grid domain_grid(const RunConfig& cfg, int n_cells) {
  return Grid(cfg.real("x_min"), cfg.real("x_max"), n_cells);
}

std::string fmt(double v) { return format_real(v); }

Output run_params(const RunConfig& cfg) {
  const FracParams p = make_params(cfg.integer("n_dim"), cfg.real("s"));
  Output out{header(cfg), CsvTable({"n_dim", "s", "c_ns", "kappa_s", "lambda_hardy", "two_star"}), {}};
  out.csv.add_row({static_cast<double>(p.n_dim), p.s, p.c_ns, p.kappa_s, p.lambda_hardy, p.two_star});
  out.json["results"] = constants_json(p);
  return out;
}

Output run_eig(const RunConfig& cfg) {
  const FracParams p = make_params(1, cfg.real("s"));
  const Grid g = domain_grid(cfg, cfg.integer("n_cells"));
  const StiffnessOperator a(g, p);
  const MassOperator m(g);
  EigOptions opts;
  opts.tolerance = cfg.real("eig_tol");
  const EigenPairs e = solve_eigs(a, m, g.all_interior(), cfg.integer("count"), opts);

  Output out{header(cfg), CsvTable({"index", "lambda", "residual"}), {}};
  for (int k = 0; k < e.count(); ++k) out.csv.add_row({k + 1.0, e.values(k), e.residuals(k)});
  const double bound = p.lambda_hardy / std::pow(g.x_max() - g.x_min(), 2.0 * p.s);
  Json r = Json::object();
  r["values"] = std::vector<double>(e.values.data(), e.values.data() + e.count());
  r["max_residual"] = e.residuals.maxCoeff();
  r["tolerance"] = e.tolerance;
  r["hardy_lower_bound"] = bound;
  out.json["results"] = r;
  out.verdicts.push_back(make_verdict("hardy_lower_bound", e.values(0) >= bound,
                                      "lambda_1 = " + fmt(e.values(0)) + " >= " + fmt(bound)));
  return out;
}

Output run_capacity(const RunConfig& cfg, bool with_data) {
  const FracParams p = make_params(1, cfg.real("s"));
  const Grid g = domain_grid(cfg, cfg.integer("n_cells"));
  const StiffnessOperator a(g, p);
  const NodeMask mask = nodes_in_set(g, cfg.intervals("K"));
  Eigen::VectorXd data = Eigen::VectorXd::Ones(a.size());
  double lambda = 0.0;
  if (with_data) {
    const MassOperator m(g);
    EigOptions opts;
    opts.tolerance = cfg.real("eig_tol");
    const int j = cfg.integer("j");
    const EigenPairs e = solve_eigs(a, m, g.all_interior(), j, opts);
    data = e.vectors.col(j - 1);
    lambda = e.values(j - 1);
  }
  const CapacityResult r = u_capacity(a, g.all_interior(), mask, data);

  Output out{header(cfg), CsvTable({"x", "data", "potential"}), {}};
  for (int q = 0; q < a.size(); ++q) out.csv.add_row({g.interior_node(q), data(q), r.potential(q)});
  Json res = Json::object();
  res["value"] = r.value;
  res["residual"] = r.residual;
  res["covers_all"] = r.covers_all;
  res["k_nodes"] = mask.indices.size();
  res["potential_min"] = r.potential.minCoeff();
  res["potential_max"] = r.potential.maxCoeff();
  if (with_data) res["lambda_j"] = lambda;
  if (r.covers_all) res["warning"] = "K covers every interior node";
  out.json["results"] = res;
  const double tol = 1e-10 * a.generator()[0];
  out.verdicts.push_back(make_verdict("euler_lagrange", r.residual <= tol,
                                      "max defect " + fmt(r.residual) + " <= " + fmt(tol)));
  if (with_data) {
    out.verdicts.push_back(make_verdict("below_eigenvalue", r.value <= lambda + 1e-9,
                                        "ucap " + fmt(r.value) + " <= lambda_j " + fmt(lambda)));
  } else {
    const bool ok = r.potential.minCoeff() >= -1e-10 && r.potential.maxCoeff() <= 1.0 + 1e-10;
    out.verdicts.push_back(make_verdict("maximum_principle", ok, "potential within [0, 1] up to 1e-10"));
  }
  return out;
}

Output run_angular(const RunConfig& cfg) {
  const int n_dim = cfg.integer("n_dim");
  const double s = cfg.real("s");
  const AngularSpectrum sp = solve_angular(n_dim, s, cfg.integer("angular_cells"), cfg.integer("count"));
  Output out{header(cfg), CsvTable({"index", "mu", "gamma", "trace_minus", "trace_plus"}), {}};
  std::vector<double> gammas;
  for (Eigen::Index k = 0; k < sp.mu.size(); ++k) {
    const double g = gamma_exponent(n_dim, s, std::max(sp.mu(k), 0.0));
    gammas.push_back(g);
    out.csv.add_row({k + 1.0, sp.mu(k), g, sp.trace_minus[k], sp.trace_plus[k]});
  }
  Json res = Json::object();
  res["mu"] = std::vector<double>(sp.mu.data(), sp.mu.data() + sp.mu.size());
  res["gamma"] = gammas;
  if (n_dim >= 2) res["note"] = "axisymmetric modes only";
  out.json["results"] = res;
  out.verdicts.push_back(make_verdict("ground_zero", std::abs(sp.mu(0)) <= 1e-6, "mu_1 = " + fmt(sp.mu(0))));
  return out;
}

Output run_sweep_command(const RunConfig& cfg) {
  SweepConfig sc;
  sc.s = cfg.real("s");
  sc.j = cfg.integer("j");
  sc.k = cfg.intervals("K");
  sc.eps = cfg.reals("eps");
  sc.x_min = cfg.real("x_min");
  sc.x_max = cfg.real("x_max");
  sc.n_cells = cfg.integer("n_cells");
  sc.eig_count = cfg.integer("count");
  sc.min_relative_gap = cfg.real("min_gap");
  sc.resolution_factor = cfg.real("resolution_factor");
  sc.eig.tolerance = cfg.real("eig_tol");
  const SweepTable t = run_sweep(sc);

  Output out{header(cfg), CsvTable({"eps", "lambda0", "lambda_eps", "shift", "ucap", "ratio", "cap"}), {}};
  std::vector<std::pair<double, double>> shifts;
  bool monotone = true;
  for (const SweepRow& r : t.rows) {
    out.csv.add_row({r.eps, r.lambda0, r.lambda_eps, r.shift, r.ucap, r.ratio, r.cap});
    shifts.emplace_back(r.eps, r.shift);
    if (r.shift < -1e-10) monotone = false;
    for (std::size_t k = 0; k < r.hole_values.size(); ++k) {
      if (r.hole_values[k] < t.base_values[k] - 1e-10) monotone = false;
    }
  }
  Json res = Json::object();
  res["base_values"] = t.base_values;
  Json rows = Json::array();
  for (const SweepRow& r : t.rows) {
    Json row = Json::object();
    row["eps"] = r.eps;
    row["hole_nodes"] = r.hole_nodes;
    row["hole_values"] = r.hole_values;
    row["potential_min"] = r.potential_min;
    row["potential_max"] = r.potential_max;
    rows.push_back(row);
  }
  res["rows"] = rows;
  out.verdicts.push_back(make_verdict("minimax_monotonicity", monotone,
                                      "shift >= -1e-10 and lambda_k(hole) >= lambda_k - 1e-10"));
  out.verdicts.push_back(verify_expansion(t, cfg.real("tol_expansion")));
  out.verdicts.push_back(continuity_check(t));

  const Grid g = domain_grid(cfg, sc.n_cells);
  const FracParams p = t.params;
  bool have_profile = false;
  ProfileEstimate prof;
  try {
    const AngularSpectrum sp = solve_angular(1, sc.s, cfg.integer("angular_cells"), std::max(4, sc.j + 2));
    prof = estimate_profile(t.u_j, g, sp, cfg.real("fit_lo"), cfg.real("fit_hi"));
    have_profile = true;
  } catch (const DomainError& e) {
    res["profile_error"] = e.what();
  }

  if (shifts.size() >= 3) {
    const RateFit fit = fit_rate(shifts);
    Json rf = Json::object();
    rf["exponent"] = fit.exponent;
    rf["log_prefactor"] = fit.log_prefactor;
    rf["prefactor"] = fit.prefactor();
    rf["r_squared"] = fit.r_squared;
    rf["window"] = fit.window;
    if (have_profile) {
      const double predicted = p.n_dim + 2.0 * (prof.profile.gamma() - p.s);
      rf["predicted_exponent"] = predicted;
      const double tol = prof.profile.gamma() == 0.0 ? 0.05 : 0.1;
      out.verdicts.push_back(make_verdict(
          "shift_exponent", std::abs(fit.exponent - predicted) <= tol,
          "fitted " + fmt(fit.exponent) + ", predicted " + fmt(predicted) + " +- " + fmt(tol)));
    }
    res["rate_fit"] = rf;
  }

  if (have_profile) {
    Json pj = Json::object();
    pj["gamma"] = prof.profile.gamma();
    pj["angular_index"] = prof.angular_index;
    pj["fitted_gamma"] = prof.fit.gamma_est;
    pj["psi_plus"] = prof.profile.psi_plus();
    pj["psi_minus"] = prof.profile.psi_minus();
    res["profile"] = pj;
    if (cfg.flag("prefactor")) {
      const ExtrapolationResult wl = whole_line_u_capacity(sc.k, prof.profile, cfg.reals("radii"),
                                                           cfg.integer("cells_per_unit"), p);
      Json w = Json::object();
      w["radii"] = wl.radii;
      w["values"] = wl.values;
      w["last"] = wl.last;
      w["relative_gap"] = wl.relative_gap;
      res["whole_line"] = w;
      out.verdicts.push_back(make_verdict("whole_line_cauchy_gap", wl.relative_gap <= cfg.real("tol_cauchy"),
                                          "relative gap " + fmt(wl.relative_gap) + " <= " +
                                              fmt(cfg.real("tol_cauchy")),
                                          wl.values));
      out.verdicts.push_back(
          scaling_prefactor_check(t, prof.profile.gamma(), wl.last, cfg.real("tol_prefactor")));
    }
  }
  out.json["results"] = res;
  return out;
}

Output run_extension_check(const RunConfig& cfg) {
  ExtensionSetup setup;
  setup.n_cells = cfg.integer("ext_n_cells");
  setup.T = cfg.real("T");
  setup.m_t = cfg.integer("m_t");
  setup.beta = cfg.real("beta");
  setup.padding.width = cfg.real("pad_width");
  setup.padding.growth = cfg.real("pad_growth");
  const double s = cfg.real("s");
  const auto k = cfg.intervals("ext_K");
  const int count = cfg.integer("count");
  const int trials = cfg.integer("trials");
  const auto seed = static_cast<unsigned long long>(cfg.integer("seed"));

  std::vector<PathComparison> runs;
  runs.push_back(compare_paths(s, cfg.real("x_min"), cfg.real("x_max"), setup, k, count, trials, seed));
  if (cfg.flag("refine")) {
    ExtensionSetup finer = setup;
    finer.n_cells *= 2;
    finer.m_t *= 2;
    runs.push_back(compare_paths(s, cfg.real("x_min"), cfg.real("x_max"), finer, k, count, trials, seed));
  }

  Output out{header(cfg), CsvTable({"quantity", "n_cells", "m_t", "direct", "extension", "relative_error"}), {}};
  Json res = Json::array();
  std::vector<double> eig_err;
  std::vector<double> cap_err;
  std::vector<double> spread;
  for (const PathComparison& r : runs) {
    const double n = r.setup.n_cells;
    const double m = r.setup.m_t;
    for (int q = 0; q < count; ++q) {
      const double err = std::abs(r.lambda_extension[q] / r.lambda_direct[q] - 1.0);
      out.csv.add_row("lambda_" + std::to_string(q + 1), {n, m, r.lambda_direct[q], r.lambda_extension[q], err});
    }
    eig_err.push_back(std::abs(r.lambda_extension[0] / r.lambda_direct[0] - 1.0));
    cap_err.push_back(std::abs(r.cap_extension / r.cap_direct - 1.0));
    spread.push_back(r.energy_ratio_max - r.energy_ratio_min);
    out.csv.add_row("capacity", {n, m, r.cap_direct, r.cap_extension, cap_err.back()});
    Json j = Json::object();
    j["n_cells"] = r.setup.n_cells;
    j["m_t"] = r.setup.m_t;
    j["T"] = r.setup.T;
    j["beta"] = r.setup.beta;
    j["mesh_nodes"] = r.mesh_nodes;
    j["lambda_direct"] = r.lambda_direct;
    j["lambda_extension"] = r.lambda_extension;
    j["cap_direct"] = r.cap_direct;
    j["cap_extension"] = r.cap_extension;
    j["energy_ratio_min"] = r.energy_ratio_min;
    j["energy_ratio_max"] = r.energy_ratio_max;
    j["trace_min_eigenvalue"] = r.trace_min_eigenvalue;
    j["hardy_ratio_max"] = r.hardy_ratio_max;
    res.push_back(j);
  }
  out.json["results"] = res;

  const PathComparison& ref = runs.front();
  const double te = cfg.real("tol_ext_eig");
  const double tc = cfg.real("tol_ext_cap");
  const double tk = cfg.real("tol_ext_energy");
  out.verdicts.push_back(make_verdict("lambda_1", eig_err[0] <= te,
                                      "relative error " + fmt(eig_err[0]) + " <= " + fmt(te), eig_err));
  out.verdicts.push_back(make_verdict("capacity", cap_err[0] <= tc,
                                      "relative error " + fmt(cap_err[0]) + " <= " + fmt(tc), cap_err));
  out.verdicts.push_back(make_verdict(
      "energy_ratio", ref.energy_ratio_min >= 1.0 - tk && ref.energy_ratio_max <= 1.0 + tk,
      "ratio / kappa_s in [" + fmt(ref.energy_ratio_min) + ", " + fmt(ref.energy_ratio_max) + "]", spread));
  out.verdicts.push_back(make_verdict("trace_positive", ref.trace_min_eigenvalue > 0.0,
                                      "smallest eigenvalue of S = " + fmt(ref.trace_min_eigenvalue)));
  bool hardy_ok = true;
  for (const PathComparison& r : runs) hardy_ok = hardy_ok && r.hardy_ratio_max <= 1.0 + 1e-3;
  out.verdicts.push_back(make_verdict("halfspace_hardy", hardy_ok,
                                      "max lhs / rhs = " + fmt(ref.hardy_ratio_max) + " <= 1 + 1e-3"));
  if (runs.size() == 2) {
    out.verdicts.push_back(make_verdict("refinement", eig_err[1] < eig_err[0] && cap_err[1] < cap_err[0],
                                        "errors decrease under one refinement step"));
    out.verdicts.push_back(make_verdict("energy_spread", spread[1] < spread[0],
                                        "energy-ratio spread shrinks under refinement", spread));
  }
  return out;
}

Output run_spectral_compare(const RunConfig& cfg) {
  const Grid g = domain_grid(cfg, cfg.integer("n_cells"));
  const ComparisonTable c = spectral_comparison(g, cfg.real("s"), cfg.integer("j"), cfg.reals("eps"));
  Output out{header(cfg), CsvTable({"eps", "classical_ucap", "predicted_shift", "restricted_shift"}), {}};
  std::vector<double> pred;
  std::vector<double> restr;
  for (const ComparisonRow& r : c.rows) {
    out.csv.add_row({r.eps, r.classical_ucap, r.predicted_shift, r.restricted_shift});
    pred.push_back(r.predicted_shift);
    restr.push_back(r.restricted_shift);
  }
  Json res = Json::object();
  const double rel = std::abs(c.classical_lambda / c.classical_lambda_exact - 1.0);
  res["classical_lambda"] = c.classical_lambda;
  res["classical_lambda_exact"] = c.classical_lambda_exact;
  res["classical_relative_error"] = rel;
  res["nu"] = c.nu;
  res["predicted_limit"] = c.predicted_limit;
  out.json["results"] = res;

  bool approaches = c.predicted_limit > 0.0;
  bool decreasing = true;
  for (std::size_t i = 1; i < c.rows.size(); ++i) {
    approaches = approaches && std::abs(pred[i] - c.predicted_limit) < std::abs(pred[i - 1] - c.predicted_limit);
    decreasing = decreasing && restr[i] < restr[i - 1];
  }
  out.verdicts.push_back(make_verdict("classical_lambda", rel <= 1e-4, "relative error " + fmt(rel)));
  out.verdicts.push_back(make_verdict("spectral_positive_limit", approaches,
                                      "predicted shift approaches " + fmt(c.predicted_limit), pred));
  out.verdicts.push_back(make_verdict("restricted_to_zero", decreasing, "restricted shift decreases", restr));
  return out;
}

}  // namespace

void validate(const RunConfig& cfg) {
  const int n_dim = cfg.integer("n_dim");
  const double s = cfg.real("s");
  if (cfg.command == "angular") {
    if (n_dim < 1 || !(s > 0.0 && s < 1.0)) {
      throw ParameterError("angular problem needs n_dim >= 1 and 0 < s < 1 (got N=" + std::to_string(n_dim) +
                           ", s=" + format_real(s) + ")");
    }
    return;
  }
  make_params(n_dim, s);
  if (cfg.command != "params" && cfg.command != "angular" && n_dim != 1) {
    throw ConfigError("key \"n_dim\": command " + cfg.command + " supports n_dim = 1 only");
  }
}

ReportBundle execute(const RunConfig& cfg) {
  validate(cfg);
  const std::string& c = cfg.command;
  if (c == "params") return finish(cfg, run_params(cfg));
  if (c == "eig") return finish(cfg, run_eig(cfg));
  if (c == "cap") return finish(cfg, run_capacity(cfg, false));
  if (c == "ucap") return finish(cfg, run_capacity(cfg, true));
  if (c == "angular") return finish(cfg, run_angular(cfg));
  if (c == "sweep") return finish(cfg, run_sweep_command(cfg));
  if (c == "extension-check") return finish(cfg, run_extension_check(cfg));
  if (c == "spectral-compare") return finish(cfg, run_spectral_compare(cfg));
  throw ConfigError("unknown command \"" + c + "\"");
}

ReportBundle failure_bundle(const RunConfig& cfg, const std::string& kind, const std::string& message) {
  Json j = Json::object();
  j["command"] = cfg.command;
  j["version"] = FRACLAB_VERSION;
  j["seed"] = cfg.integer("seed");
  j["config"] = cfg.values;
  Json err = Json::object();
  err["kind"] = kind;
  err["message"] = message;
  j["error"] = err;
  ReportBundle b;
  b.files.emplace_back(cfg.command + ".json", j.dump(2) + "\n");
  return b;
}

}  // namespace fraclab::cli
