#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "fraclab/grid.hpp"

namespace fraclab::cli {

using Json = nlohmann::ordered_json;

struct KeySpec {
  std::string name;
  /// Default value; its JSON type is the key's type.
  Json fallback;
  std::string doc;
};

/// Every accepted key, in the order used for config echoes.
const std::vector<KeySpec>& key_table();

const std::vector<std::string>& command_names();

struct RunConfig {
  std::string command;
  /// Effective values of every documented key except out_dir.
  Json values = Json::object();
  std::string out_dir = ".";

  double real(const std::string& key) const;
  int integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<Interval> intervals(const std::string& key) const;
};

/// Parses "key = value" lines ('#' starts a comment) followed by "key=value" overrides.
/// Values use JSON syntax; bare words are accepted for string keys. Throws ConfigError naming
/// the key on unknown keys, type mismatches and malformed lines.
RunConfig parse_config(const std::string& command, const std::string& file_text,
                       const std::vector<std::string>& overrides,
                       const std::string& default_out_dir = ".");

/// Reads a config file; IoError when it cannot be opened.
std::string read_text_file(const std::string& path);

}  // namespace fraclab::cli
