#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fraclab/errors.hpp"

namespace fraclab::cli {

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"n_dim", 1, "space dimension N (only params and angular accept N > 1)"},
      {"s", 0.25, "fractional order, 0 < s < min(1, N/2); angular allows 0 < s < 1"},
      {"j", 1, "eigenvalue index (1-based)"},
      {"x_min", -1.0, "left end of the domain"},
      {"x_max", 1.0, "right end of the domain"},
      {"n_cells", 1600, "grid cells for eig, cap, ucap, sweep and spectral-compare"},
      {"K", Json::parse("[[-1,1]]"), "compact set as a list of [lo, hi] intervals"},
      {"eps", Json::parse("[0.2,0.1,0.05,0.025,0.0125]"), "strictly decreasing scale list"},
      {"count", 4, "eigenpairs per solve"},
      {"eig_tol", 1e-10, "relative residual tolerance of the eigensolver"},
      {"min_gap", 1e-3, "simplicity gate on (lambda_{j+1} - lambda_j) / lambda_j"},
      {"resolution_factor", 8.0, "sweep requires h <= eps_min / resolution_factor"},
      {"tol_expansion", 0.15, "tolerance on |shift/ucap - 1| at the smallest eps"},
      {"tol_prefactor", 0.1, "relative tolerance of the prefactor check"},
      {"tol_cauchy", 0.02, "relative Cauchy gap allowed for the whole-line capacity"},
      {"prefactor", true, "run the whole-line prefactor check in sweep"},
      {"radii", Json::parse("[4,8,16,32]"), "box radii for the whole-line capacity"},
      {"cells_per_unit", 10, "grid cells per unit length for the whole-line capacity"},
      {"fit_lo", 0.02, "lower radius of the vanishing-order window"},
      {"fit_hi", 0.2, "upper radius of the vanishing-order window"},
      {"angular_cells", 800, "cells of the angular mesh"},
      {"ext_n_cells", 400, "grid cells for extension-check"},
      {"ext_K", Json::parse("[[-0.25,0.25]]"), "set whose capacity extension-check compares"},
      {"T", 32.0, "height of the truncated half-plane"},
      {"m_t", 128, "number of t-layers"},
      {"beta", 4.0, "layer grading exponent, t_j = T (j/m_t)^beta"},
      {"pad_width", -1.0, "lateral padding beyond the domain (negative: T)"},
      {"pad_growth", 1.1, "cell growth ratio in the lateral padding"},
      {"refine", true, "extension-check also runs one refinement step (2 n_cells, 2 m_t)"},
      {"trials", 50, "random vectors for the energy-ratio and half-space Hardy checks"},
      {"tol_ext_eig", 0.02, "extension-check tolerance on lambda_1"},
      {"tol_ext_cap", 0.05, "extension-check tolerance on the capacity"},
      {"tol_ext_energy", 0.05, "extension-check tolerance on the energy ratio / kappa_s"},
      {"seed", 42, "random seed (recorded even when unused)"},
      {"out_dir", ".", "output directory (FRACLAB_OUTPUT_DIR sets the default)"},
  };
  return table;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "params", "eig", "cap", "ucap", "angular", "sweep", "extension-check", "spectral-compare"};
  return names;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const KeySpec* find_key(const std::string& name) {
  for (const KeySpec& k : key_table()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

std::string valid_keys() {
  std::string out;
  for (const KeySpec& k : key_table()) out += (out.empty() ? "" : ", ") + k.name;
  return out;
}

bool same_shape(const Json& value, const Json& fallback) {
  if (fallback.is_boolean()) return value.is_boolean();
  if (fallback.is_number_integer()) return value.is_number_integer();
  if (fallback.is_number()) return value.is_number();
  if (fallback.is_string()) return value.is_string();
  if (fallback.is_array()) {
    if (!value.is_array()) return false;
    const bool nested = !fallback.empty() && fallback.front().is_array();
    for (const Json& item : value) {
      if (nested) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
          return false;
        }
      } else if (!item.is_number()) {
        return false;
      }
    }
    return true;
  }
  return false;
}

void assign(RunConfig& cfg, const std::string& key, const std::string& raw) {
  const KeySpec* spec = find_key(key);
  if (!spec) throw ConfigError("unknown key \"" + key + "\"; valid keys: " + valid_keys());
  Json value;
  if (spec->fallback.is_string()) {
    value = raw;
  } else {
    try {
      value = Json::parse(raw);
    } catch (const std::exception&) {
      throw ConfigError("key \"" + key + "\": cannot parse value \"" + raw + "\"");
    }
    // Integral literals are accepted for real keys.
    if (spec->fallback.is_number_float() && value.is_number()) value = value.get<double>();
  }
  if (!same_shape(value, spec->fallback)) {
    throw ConfigError("key \"" + key + "\": expected a value shaped like " + spec->fallback.dump() +
                      ", got " + raw);
  }
  if (key == "out_dir") {
    cfg.out_dir = value.get<std::string>();
  } else {
    cfg.values[key] = value;
  }
}

void split_assign(RunConfig& cfg, const std::string& line, const std::string& where) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) throw ConfigError(where + ": expected key=value, got \"" + line + "\"");
  assign(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
}

}  // namespace

double RunConfig::real(const std::string& key) const { return values.at(key).get<double>(); }
int RunConfig::integer(const std::string& key) const { return values.at(key).get<int>(); }
bool RunConfig::flag(const std::string& key) const { return values.at(key).get<bool>(); }

std::vector<double> RunConfig::reals(const std::string& key) const {
  return values.at(key).get<std::vector<double>>();
}

std::vector<Interval> RunConfig::intervals(const std::string& key) const {
  std::vector<Interval> out;
  for (const Json& item : values.at(key)) out.push_back({item[0].get<double>(), item[1].get<double>()});
  return out;
}

RunConfig parse_config(const std::string& command, const std::string& file_text,
                       const std::vector<std::string>& overrides, const std::string& default_out_dir) {
  if (std::find(command_names().begin(), command_names().end(), command) == command_names().end()) {
    std::string list;
    for (const auto& c : command_names()) list += (list.empty() ? "" : " | ") + c;
    throw ConfigError("unknown command \"" + command + "\"; expected one of " + list);
  }
  RunConfig cfg;
  cfg.command = command;
  cfg.out_dir = default_out_dir;
  for (const KeySpec& k : key_table()) {
    if (k.name != "out_dir") cfg.values[k.name] = k.fallback;
  }
  std::istringstream in(file_text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;  // blank lines and section headers
    split_assign(cfg, line, "config line " + std::to_string(number));
  }
  for (const std::string& o : overrides) split_assign(cfg, o, "override");

  if (cfg.integer("n_cells") < 2) throw ConfigError("key \"n_cells\": must be at least 2");
  if (cfg.integer("ext_n_cells") < 2) throw ConfigError("key \"ext_n_cells\": must be at least 2");
  if (cfg.integer("count") < 1) throw ConfigError("key \"count\": must be at least 1");
  if (cfg.integer("j") < 1) throw ConfigError("key \"j\": must be at least 1");
  if (cfg.integer("trials") < 1) throw ConfigError("key \"trials\": must be at least 1");
  if (cfg.integer("seed") < 0) throw ConfigError("key \"seed\": must be nonnegative");
  return cfg;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fraclab::cli
