// Command-line front end: parses global options and a subcommand name,
// loads the run configuration, and dispatches to the library runner.

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <limits>
#include <string>

#include "bcslab/config.hpp"
#include "bcslab/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"bcslab: pairing-transition laboratory (units: hbar = 2m = 1)"};
  app.fallthrough();

  std::string config_path;
  std::string out_path;
  int threads = 1;
  unsigned long long seed = 0;

  app.add_option("--config", config_path, "Path to an INI configuration file");
  app.add_option("--out", out_path, "Output CSV path ('-' or empty for stdout)");
  app.add_option("--threads", threads, "Worker threads for row-parallel commands")
      ->check(CLI::Range(1, std::numeric_limits<int>::max()));
  app.add_option("--seed", seed,
                 "Random seed (reserved for the Monte-Carlo cross-check)");

  static const char* kSubcommands[][2] = {
      {"scatter", "Scattering length by two independent methods"},
      {"tc", "Critical temperature for a single chemical potential"},
      {"mmu", "Fermi-surface integral m(T, mu) and its asymptotic form"},
      {"sweep", "Critical-temperature sweep across chemical potentials"},
      {"gap", "Nonlinear gap profiles on a temperature ladder"},
      {"diagnose", "Correction-term diagnostics for the asymptotic law"},
      {"validate", "Potential assumption checks and derived constants"},
  };
  for (const auto& sc : kSubcommands) {
    app.add_subcommand(sc[0], sc[1])->fallthrough();
  }
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << bcslab::usage_text();
    return 2;
  }

  const auto picked = app.get_subcommands();
  if (picked.empty()) {
    std::cerr << bcslab::usage_text();
    return 2;
  }
  const std::string sub = picked.front()->get_name();

  try {
    const bcslab::RunConfig cfg = config_path.empty()
                                      ? bcslab::parse_config("")
                                      : bcslab::load_config(config_path);
    return bcslab::run_command_to_path(sub, cfg, threads, seed, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
