#pragma once
// Subcommand engine behind the command-line tool. Each subcommand computes
// its rows first, then writes a '#'-prefixed manifest (config hash, grid
// sizes, tolerances, thread count, seed, wall time), a CSV header, and the
// data rows. All numbers are written in scientific notation with 17
// significant digits and '.' as the decimal separator; output bytes are
// identical across reruns of the same config except for the wall-time line.

#include <ostream>
#include <string>

#include "bcslab/config.hpp"

namespace bcslab {

// Executes one subcommand (scatter, tc, mmu, sweep, gap, diagnose,
// validate) and writes the result to os. Returns the process exit code:
// 0 on success, 1 when any row failed (failed rows are still written, with
// an explanatory comment line), 2 for an unknown subcommand (usage text is
// written instead of CSV).
int run_command(const std::string& subcommand, const RunConfig& cfg, int n_threads,
                unsigned long long seed, std::ostream& os);

// Same, writing to out_override when nonempty, else cfg.out_path; "-" or
// empty selects stdout. I/O failures carry the path in the error message.
int run_command_to_path(const std::string& subcommand, const RunConfig& cfg, int n_threads,
                        unsigned long long seed, const std::string& out_override);

// One-paragraph usage summary listing subcommands and flags.
const char* usage_text();

} // namespace bcslab
