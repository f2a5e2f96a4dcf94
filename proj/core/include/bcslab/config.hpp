#pragma once
// Run configuration: a small INI dialect (bracketed sections, key = value,
// '#' comments) parsed into a validated RunConfig. Unknown sections or keys
// are hard errors with line numbers, so configs cannot silently drift.

#include <optional>
#include <string>
#include <vector>

#include "bcslab/grids.hpp"
#include "bcslab/potential.hpp"

namespace bcslab {

// Defaults are chosen so an empty config describes a complete, fast run:
// an attractive unit square well probed at mu = 0.1.
//
//   [potential] kind = square_well | gaussian | exponential | tabulated
//               depth (> 0 attractive), radius / width / range, file
//   [grid]      n, r_max (0 = automatic), p_max, window_factor, quality
//   [run]       mu, T, mu_list (strictly decreasing), t_list, delta0
//   [tolerances] tail, t_floor_rel
//   [output]    path ("-" or empty = stdout)
struct RunConfig {
  // [potential]
  std::string potential_kind = "square_well";
  double depth = 1.0;
  double radius = 1.0;  // square_well
  double width = 1.0;   // gaussian
  double range = 1.0;   // exponential
  std::string potential_file;  // tabulated

  // [grid]
  int n = 384;
  double r_max = 0.0;  // 0 = automatic from the potential tail
  double p_max = 48.0;
  double window_factor = 1.0;  // scales the inner window half-width (25 per unit)
  double quality = 1.0;

  // [run]
  double mu = 0.1;
  double T = 0.01;
  std::vector<double> mu_list;  // empty = subcommand default {1e-2, 1e-3, 1e-4}
  std::vector<double> t_list;   // empty = subcommand builds a ladder around tc
  std::optional<double> delta0; // unset = gap subcommand starts from 0.1 * mu

  // [tolerances]
  double tail = 1e-6;
  double t_floor_rel = 1e-280;

  // [output]
  std::string out_path;

  // FNV-1a 64 hash of the raw config text, as 16 hex digits.
  std::string config_hash;

  // Translates the [grid] and [tolerances] keys into the momentum-measure
  // parameter bundle used by the compute modules.
  GridSpec grid_spec() const;
  // Instantiates the configured potential (reads the file when tabulated).
  Potential make_potential() const;
};

// Parses and validates raw config text. Errors carry 1-based line numbers
// for syntax problems and the offending key name for semantic ones.
RunConfig parse_config(const std::string& text);

// Reads the file and parses it; errors mention the path.
RunConfig load_config(const std::string& path);

} // namespace bcslab
