#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "dsbu/concentration.hpp"
#include "dsbu/spectral.hpp"

namespace dsbu {

enum class Mode { kGroundState, kEvolve, kAnalyze, kVerify };
std::string to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view s);

enum class InitialKind { kGaussian, kNegativeEnergy, kSnapshot, kStandingWave, kPcBlowup };
std::string to_string(InitialKind k);

/// Everything one invocation needs. Produced by parse_config; every field is
/// validated and defaults are resolved (dt0 in particular).
struct RunConfig {
  Mode mode = Mode::kVerify;

  int n = 256;
  double box_length = 16.0;
  OperatorParams params;

  // Initial condition (evolve).
  InitialKind initial = InitialKind::kGaussian;
  double amplitude = 1.0;
  double width_x1 = 1.0;
  double width_x2 = 1.0;
  std::filesystem::path snapshot_path;
  double pc_t0 = -1.0;

  // Stepping and sampling.
  double t_end = 1.0;
  double dt0 = 0.0;  ///< resolved: 0.25 dx^2 unless given
  bool dt0_given = false;  ///< false: a snapshot initial condition re-resolves dt0 on its own grid
  bool adaptive = false;
  double c_adapt = 0.1;
  bool dealias = false;
  double sample_interval = 0.0;
  double sup_guard = 0.0;
  double gradient_guard = 0.0;
  long max_steps = 100'000'000;
  int snapshot_stride = 0;  ///< write every k-th sample as a snapshot; 0 = final state only

  // Ground state.
  int gs_n = 512;
  double gs_box_length = 48.0;
  double gs_tol = 1e-10;
  int gs_max_iterations = 2000;
  std::optional<double> c_opt;  ///< analyze: skip the ground-state solve when given

  // Concentration schedules (analyze).
  std::filesystem::path input_dir;
  LambdaKind schedule = LambdaKind::kParabolicMinusEps;
  double epsilon = 0.1;
  double c_side = 10.0;
  double eta = 0.5;
  std::optional<double> t_star;  ///< analyze: estimated from input_dir/records.csv when absent

  std::filesystem::path output_dir = "out";
};

/// Parses `key = value` lines ('#' starts a comment). `mode` is used when the
/// text has no `mode` key; a conflicting `mode` key is an error. Throws
/// UsageError naming the line for unknown or repeated keys, malformed or
/// out-of-range values, and missing keys required by the mode.
RunConfig parse_config(std::string_view text, std::optional<Mode> mode = std::nullopt);

/// Reads and parses a config file. Relative input paths (snapshot_path,
/// input_dir) resolve against the file's directory; output_dir does not.
RunConfig load_config(const std::filesystem::path& path, std::optional<Mode> mode = std::nullopt);

}  // namespace dsbu
