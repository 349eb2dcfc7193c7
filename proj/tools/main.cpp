#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/report.hpp"
#include "fraclab/errors.hpp"

namespace {

std::string key_help() {
  std::string text = "Keys (key=value, JSON syntax for lists):\n";
  for (const auto& k : fraclab::cli::key_table()) {
    text += "  " + k.name + " = " + k.fallback.dump() + "  " + k.doc + "\n";
  }
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fraclab;

  CLI::App app{"Spectral stability of the fractional Laplacian under small removals"};
  app.set_version_flag("--version", std::string(FRACLAB_VERSION));
  app.footer(key_help());
  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string commands;
  for (const auto& c : cli::command_names()) commands += (commands.empty() ? "" : ", ") + c;
  app.add_option("command", command, "One of: " + commands)->required();
  app.add_option("--config", config_path, "Config file of key = value lines");
  app.add_option("overrides", overrides, "key=value overrides applied after the config file");
  CLI11_PARSE(app, argc, argv);

  const char* env_dir = std::getenv("FRACLAB_OUTPUT_DIR");
  const std::string default_dir = env_dir != nullptr ? env_dir : ".";

  cli::RunConfig cfg;
  try {
    const std::string text = config_path.empty() ? std::string() : cli::read_text_file(config_path);
    cfg = cli::parse_config(command, text, overrides, default_dir);
    cli::validate(cfg);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 1;
  }

  auto fail = [&](const std::string& kind, const Error& e) {
    std::cerr << kind << ": " << e.what() << "\n";
    try {
      cli::write_bundle(cli::failure_bundle(cfg, kind, e.what()), cfg.out_dir);
    } catch (const IoError& io) {
      std::cerr << "could not write diagnostics: " << io.what() << "\n";
    }
    return 2;
  };

  try {
    const cli::ReportBundle bundle = cli::execute(cfg);
    cli::write_bundle(bundle, cfg.out_dir);
    for (const auto& [name, content] : bundle.files) std::cout << cfg.out_dir << "/" << name << "\n";
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 1;
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return 1;
  } catch (const ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    return fail("numerical error", e);
  } catch (const DomainError& e) {
    return fail("domain error", e);
  }
  return 0;
}
