#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "dsbu/config.hpp"
#include "dsbu/evolution.hpp"

namespace dsbu {

/// Output directory after applying the DSBU_OUTPUT_DIR override.
std::filesystem::path resolve_output_dir(const RunConfig& cfg);

/// Initial state for an evolve run, as described by the config.
SimulationState build_initial_state(const RunConfig& cfg);

/// Stepping options of an evolve run; on_sample is left empty.
EvolveConfig evolve_config_for(const RunConfig& cfg, const SimulationState& s0);

/// Writes ground_state.dsbu and ground_state.txt; prints the report.
void command_ground_state(const RunConfig& cfg, std::ostream& out);

/// Writes records.csv, evolve_summary.txt and snapshots/snap_NNNNNN.dsbu.
RunResult command_evolve(const RunConfig& cfg, std::ostream& out);

/// Reads snapshots from input_dir (or input_dir/snapshots); writes
/// concentration.csv, squares.csv and analyze_summary.txt.
void command_analyze(const RunConfig& cfg, std::ostream& out);

/// Prints a table of closed-form and brute-force oracle checks. Returns true
/// when every row passes.
bool command_verify(const RunConfig& cfg, std::ostream& out);

/// Entry point of the dsbu executable: 0 ok, 1 domain/runtime error, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dsbu
