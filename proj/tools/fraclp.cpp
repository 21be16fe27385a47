#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fraclp/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fraclp: fractional heat kernels, square functions and their verification campaigns"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command, including CSV columns");

  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  static const std::vector<Flag> flags{
      {"--alpha", "alpha", "Stability index list, e.g. 0.5,1,1.5"},
      {"--beta", "beta", "Derivative order list"},
      {"--p", "p", "Integrability exponent list"},
      {"--dim", "dim", "Space dimension (1-3)"},
      {"--nx", "nx", "Points per space axis (power of two)"},
      {"--nt", "nt", "Time steps"},
      {"--seed", "seed", "Family / noise seed"},
      {"--samples", "samples", "Number of test-family samples"},
      {"--workers", "workers", "Worker threads (default $FRACLP_WORKERS or 1)"},
      {"--out", "out", "Output directory"},
      {"--convention", "convention", "Fourier convention: canonical or paper"},
  };

  std::string config_path;
  std::map<std::string, std::string> values;
  std::vector<std::string> sets;
  for (const auto& name : fraclp::command_names()) {
    auto* sub = app.add_subcommand(name, fraclp::command_help(name));
    sub->add_option("--config", config_path, "Flat key=value config file");
    for (const auto& f : flags) sub->add_option(f.name, values[f.key], f.help);
    sub->add_option("--set", sets, "Extra key=value override (repeatable)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    fraclp::RunConfig cfg = config_path.empty() ? fraclp::RunConfig{} : fraclp::load_config(config_path);
    cfg.set("command", app.get_subcommands().front()->get_name());
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw fraclp::ConfigError("--set expects key=value, got '" + s + "'");
      cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& f : flags) {
      const auto& v = values[f.key];
      if (!v.empty()) {
        try {
          cfg.set(f.key, v);
        } catch (const fraclp::ConfigError& e) {
          throw fraclp::ConfigError(std::string(f.name) + ": " + e.what());
        }
      }
    }
    return fraclp::execute(cfg, std::cout);
  } catch (const fraclp::InvalidArgument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
