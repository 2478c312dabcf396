#include "dsbu/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "dsbu/concentration.hpp"
#include "dsbu/csv.hpp"
#include "dsbu/error.hpp"
#include "dsbu/exact_solutions.hpp"
#include "dsbu/ground_state.hpp"
#include "dsbu/initial_data.hpp"
#include "dsbu/snapshot_io.hpp"

namespace dsbu {

namespace fs = std::filesystem;

fs::path resolve_output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("DSBU_OUTPUT_DIR"); env && *env) return fs::path(env);
  return cfg.output_dir;
}

namespace {

GroundStateResult ground_state_for(const Grid2D& grid, const RunConfig& cfg, const OperatorParams& p) {
  GroundStateConfig gc;
  gc.tol = cfg.gs_tol;
  gc.max_iterations = cfg.gs_max_iterations;
  return solve_ground_state(grid, p, gc);
}

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06zu.dsbu", index);
  return buf;
}

}  // namespace

SimulationState build_initial_state(const RunConfig& cfg) {
  cfg.params.validate();
  SimulationState s{.t = 0.0, .u = Field(Grid2D(cfg.n, cfg.box_length)), .step_index = 0, .l4_accum = 0.0,
                    .params = cfg.params};
  const Grid2D grid(cfg.n, cfg.box_length);
  switch (cfg.initial) {
    case InitialKind::kGaussian:
      s.u = gaussian_profile(grid, cfg.amplitude, cfg.width_x1, cfg.width_x2);
      break;
    case InitialKind::kNegativeEnergy:
      s.u = negative_energy_gaussian(grid, cfg.params).u;
      break;
    case InitialKind::kSnapshot: {
      LoadedSnapshot snap = read_snapshot(cfg.snapshot_path);
      if (snap.meta.nu != cfg.params.nu || snap.meta.gamma != cfg.params.gamma) {
        throw UsageError("snapshot was written with (nu, gamma) = (" + std::to_string(snap.meta.nu) + ", " +
                         format_double(snap.meta.gamma) + "); set the same values in the config");
      }
      s.u = std::move(snap.u);
      s.t = snap.meta.t;
      break;
    }
    case InitialKind::kStandingWave:
      s.u = ground_state_for(grid, cfg, cfg.params).profile;
      break;
    case InitialKind::kPcBlowup: {
      // R on the grid whose natural pc grid at t0 is the run grid.
      const Grid2D r_grid(cfg.n, cfg.box_length / std::abs(cfg.pc_t0));
      const GroundStateResult gs = ground_state_for(r_grid, cfg, cfg.params);
      s.u = eval_pc_blowup(gs.profile, cfg.pc_t0, grid);
      s.t = cfg.pc_t0;
      break;
    }
  }
  return s;
}

EvolveConfig evolve_config_for(const RunConfig& cfg, const SimulationState& s0) {
  EvolveConfig ec;
  ec.t_end = cfg.t_end;
  ec.dt0 = cfg.dt0;
  if (!cfg.dt0_given && s0.u.grid() != Grid2D(cfg.n, cfg.box_length)) ec.dt0 = 0.0;  // snapshot grid decides
  ec.adaptive = cfg.adaptive;
  ec.c_adapt = cfg.c_adapt;
  ec.sample_interval = cfg.sample_interval;
  ec.sup_guard = cfg.sup_guard;
  ec.gradient_guard = cfg.gradient_guard;
  ec.max_steps = cfg.max_steps;
  ec.stepper.dealias = cfg.dealias;
  return ec;
}

void command_ground_state(const RunConfig& cfg, std::ostream& out) {
  const Grid2D grid(cfg.gs_n, cfg.gs_box_length);
  const GroundStateResult gs = ground_state_for(grid, cfg, cfg.params);
  const SharpnessReport sharp = verify_sharp_inequality(gs.profile, gs, cfg.params);

  std::ostringstream rep;
  rep << "n = " << grid.n() << "\n"
      << "box_length = " << format_double(grid.box_length()) << "\n"
      << "nu = " << cfg.params.nu << "\n"
      << "gamma = " << format_double(cfg.params.gamma) << "\n"
      << "zero_mode = " << format_double(cfg.params.zero_mode) << "\n"
      << "mass = " << format_double(gs.mass) << "\n"
      << "c_opt = " << format_double(gs.c_opt) << "\n"
      << "gradient_norm_sq = " << format_double(gs.gradient_norm_sq) << "\n"
      << "quartic = " << format_double(gs.quartic) << "\n"
      << "energy = " << format_double(energy(gs.profile, cfg.params)) << "\n"
      << "residual = " << format_double(gs.residual) << "\n"
      << "iterations = " << gs.iterations << "\n"
      << "sharpness_ratio = " << format_double(sharp.ratio) << "\n";

  const fs::path dir = resolve_output_dir(cfg);
  write_snapshot(dir / "ground_state.dsbu", gs.profile, {0.0, cfg.params.nu, cfg.params.gamma});
  write_text_atomic(dir / "ground_state.txt", rep.str());
  out << rep.str();
}

RunResult command_evolve(const RunConfig& cfg, std::ostream& out) {
  SimulationState s0 = build_initial_state(cfg);
  const fs::path dir = resolve_output_dir(cfg);
  const fs::path snap_dir = dir / "snapshots";
  fs::create_directories(snap_dir);
  for (const auto& entry : fs::directory_iterator(snap_dir)) {
    if (entry.path().extension() == ".dsbu") fs::remove(entry.path());
  }

  EvolveConfig ec = evolve_config_for(cfg, s0);

  std::size_t sample_index = 0;
  double last_written = std::numeric_limits<double>::quiet_NaN();
  const SnapshotMeta base{0.0, cfg.params.nu, cfg.params.gamma};
  ec.on_sample = [&](const SimulationState& s) {
    if (cfg.snapshot_stride > 0 && sample_index % static_cast<std::size_t>(cfg.snapshot_stride) == 0) {
      SnapshotMeta m = base;
      m.t = s.t;
      write_snapshot(snap_dir / snapshot_name(sample_index), s.u, m);
      last_written = s.t;
    }
    ++sample_index;
  };

  const RunResult r = run(s0, ec);
  if (!(r.final_state.t == last_written)) {
    SnapshotMeta m = base;
    m.t = r.final_state.t;
    write_snapshot(snap_dir / snapshot_name(sample_index), r.final_state.u, m);
  }

  std::ostringstream csv;
  write_records_csv(csv, r.records);
  write_text_atomic(dir / "records.csv", csv.str());

  const ConservationRecord& first = r.records.front();
  double mass_drift = 0.0, energy_drift = 0.0;
  for (const auto& rec : r.records) {
    mass_drift = std::max(mass_drift, std::abs(rec.mass - first.mass) / first.mass);
    energy_drift = std::max(energy_drift, std::abs(rec.energy - first.energy) / std::max(std::abs(first.energy), 1e-300));
  }
  std::ostringstream sum;
  sum << "initial = " << to_string(cfg.initial) << "\n"
      << "n = " << s0.u.grid().n() << "\n"
      << "box_length = " << format_double(s0.u.grid().box_length()) << "\n"
      << "nu = " << cfg.params.nu << "\n"
      << "gamma = " << format_double(cfg.params.gamma) << "\n"
      << "stop_reason = " << to_string(r.reason) << "\n"
      << "t_final = " << format_double(r.final_state.t) << "\n"
      << "steps = " << r.final_state.step_index << "\n"
      << "records = " << r.records.size() << "\n"
      << "mass0 = " << format_double(first.mass) << "\n"
      << "energy0 = " << format_double(first.energy) << "\n"
      << "max_rel_mass_drift = " << format_double(mass_drift) << "\n"
      << "max_rel_energy_drift = " << format_double(energy_drift) << "\n";
  if (r.estimate) {
    sum << "t_star = " << format_double(r.estimate->t_star) << "\n"
        << "t_star_method = " << r.estimate->method << "\n"
        << "t_star_fit_window = " << format_double(r.estimate->fit_t_begin) << " "
        << format_double(r.estimate->fit_t_end) << "\n"
        << "t_star_fit_residual = " << format_double(r.estimate->fit_residual) << "\n";
  } else {
    sum << "t_star = none\n";
  }
  write_text_atomic(dir / "evolve_summary.txt", sum.str());
  out << sum.str();
  return r;
}

void command_analyze(const RunConfig& cfg, std::ostream& out) {
  fs::path src = cfg.input_dir;
  if (fs::is_directory(src / "snapshots")) src /= "snapshots";
  if (!fs::is_directory(src)) throw UsageError("input_dir " + cfg.input_dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(src)) {
    if (entry.path().extension() == ".dsbu") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no snapshots found in " + src.string());

  std::vector<Snapshot> snaps;
  SnapshotMeta meta;
  for (const auto& f : files) {
    LoadedSnapshot ls = read_snapshot(f);
    meta = ls.meta;
    snaps.push_back({ls.meta.t, std::move(ls.u)});
  }
  std::sort(snaps.begin(), snaps.end(), [](const Snapshot& a, const Snapshot& b) { return a.t < b.t; });
  OperatorParams p = cfg.params;
  p.nu = meta.nu;
  p.gamma = meta.gamma;

  double t_star = 0.0;
  std::string t_star_source = "config";
  if (cfg.t_star) {
    t_star = *cfg.t_star;
  } else {
    std::ifstream rin(cfg.input_dir / "records.csv");
    if (!rin) throw UsageError("t_star not given and " + (cfg.input_dir / "records.csv").string() + " is missing");
    t_star = estimate_t_star(read_records_csv(rin)).t_star;
    t_star_source = "records.csv fit";
  }
  double c_opt = 0.0;
  if (cfg.c_opt) {
    c_opt = *cfg.c_opt;
  } else {
    c_opt = ground_state_for(Grid2D(cfg.gs_n, cfg.gs_box_length), cfg, p).c_opt;
  }

  const LambdaSchedule schedule{cfg.schedule, cfg.epsilon, t_star};
  const Theorem6Trace t6 = theorem6_trace(snaps, schedule, c_opt, p);
  const Theorem7Trace t7 = theorem7_trace(snaps, cfg.c_side, t_star, cfg.eta);

  const fs::path dir = resolve_output_dir(cfg);
  std::ostringstream c6, c7;
  write_concentration_csv(c6, t6.records);
  write_square_csv(c7, t7.records);
  write_text_atomic(dir / "concentration.csv", c6.str());
  write_text_atomic(dir / "squares.csv", c7.str());

  const auto& s6 = t6.summary;
  const auto& s7 = t7.summary;
  std::ostringstream sum;
  sum << "snapshots = " << snaps.size() << "\n"
      << "t_star = " << format_double(t_star) << " (" << t_star_source << ")\n"
      << "c_opt = " << format_double(c_opt) << "\n"
      << "threshold_2_over_c_opt = " << format_double(s6.threshold) << "\n"
      << "schedule = " << (cfg.schedule == LambdaKind::kConic ? "conic" : "parabolic") << " epsilon "
      << format_double(cfg.epsilon) << "\n"
      << "terminal_from_t = " << format_double(t6.records[s6.terminal_begin].t) << "\n"
      << "min_best_mass = " << format_double(s6.min_best_mass) << "\n"
      << "ratio = " << format_double(s6.ratio) << "\n"
      << "terminal_ratio = " << format_double(s6.terminal_ratio) << "\n"
      << "ratio_t_star_minus_2pct = " << format_double(s6.ratio_t_star_minus) << "\n"
      << "ratio_t_star_plus_2pct = " << format_double(s6.ratio_t_star_plus) << "\n"
      << "lambda_grad_first = " << format_double(s6.lambda_grad_first) << "\n"
      << "lambda_grad_last = " << format_double(s6.lambda_grad_last) << "\n"
      << "lambda_grad_grows = " << (s6.lambda_grad_grows ? "yes" : "no") << "\n"
      << "skipped = " << s6.skipped << "\n"
      << "square_c_side = " << format_double(cfg.c_side) << "\n"
      << "square_max_sqrt_best = " << format_double(s7.max_sqrt_best) << "\n"
      << "square_min_sqrt_best = " << format_double(s7.min_sqrt_best) << "\n"
      << "square_eta = " << format_double(s7.eta) << "\n"
      << "square_above_eta = " << (s7.above_eta ? "yes" : "no") << "\n"
      << "square_skipped = " << s7.skipped << "\n";
  write_text_atomic(dir / "analyze_summary.txt", sum.str());
  out << sum.str();
}

namespace {

struct OracleRow {
  std::string name;
  double value;
  double tolerance;
  bool pass;
};

}  // namespace

bool command_verify(const RunConfig& cfg, std::ostream& out) {
  using std::numbers::pi;
  const OperatorParams& p = cfg.params;
  std::vector<OracleRow> rows;
  auto add = [&](std::string name, double value, double tol) {
    rows.push_back({std::move(name), value, tol, std::isfinite(value) && value <= tol});
  };

  {  // B on a single Fourier mode is multiplication by its symbol.
    const Grid2D g(32, 2.0 * pi);
    const Field f = Field::sample(g, [](double x1, double x2) { return std::cos(3.0 * x1 + 4.0 * x2); });
    const Field bf = apply_B(f, p.zero_mode);
    double err = 0.0;
    for (std::size_t i = 0; i < f.values().size(); ++i) err = std::max(err, std::abs(bf.values()[i] - 0.36 * f.values()[i]));
    add("B on cos(3x1+4x2) = 9/25 cos", err, 1e-12);
  }
  {  // |L f| <= (1 + gamma) |f| on seeded random real fields.
    const Grid2D g(32, 10.0);
    std::mt19937_64 rng(20240601);
    std::normal_distribution<double> dist;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      Field f(g);
      for (auto& v : f.values()) v = dist(rng);
      worst = std::max(worst, apply_L(f, p).l2_norm() / ((1.0 + p.gamma) * f.l2_norm()));
    }
    add("max |L f| / ((1+gamma)|f|) - 1", worst - 1.0, 1e-12);
  }
  {  // Gaussian integrals: mass = pi A^2, |grad|^2 = pi A^2.
    const Grid2D g(128, 16.0);
    const double a = 1.3;
    const Field u = gaussian_profile(g, a);
    add("gaussian mass vs pi A^2 (rel)", std::abs(mass(u) / (pi * a * a) - 1.0), 1e-12);
    add("gaussian grad_sq vs pi A^2 (rel)", std::abs(gradient_norm_sq(u) / (pi * a * a) - 1.0), 1e-12);
  }
  {  // A constant rotates at rate (nu + gamma m0) A^2.
    const Grid2D g(16, 4.0);
    const double a = 0.8, dt = 0.1;
    Field u = Field::sample(g, [&](double, double) { return a; });
    SplitStepper st(g, p);
    st.step(u, dt);
    const Complex expected = a * std::polar(1.0, (p.nu + p.gamma * p.zero_mode) * a * a * dt);
    add("constant-field phase rotation", std::abs(u(3, 5) - expected), 1e-14);
  }
  {  // Exact inverse-linear gradient trace.
    std::vector<ConservationRecord> recs;
    for (int k = 0; k <= 30; ++k) {
      ConservationRecord r;
      r.t = 1.0 - std::pow(10.0, -k / 10.0);
      r.gradient_norm_sq = 1.0 / (1.0 - r.t);
      recs.push_back(r);
    }
    add("T* fit on 1/(1-t) trace", std::abs(estimate_t_star(recs).t_star - 1.0), 1e-8);
  }
  {  // FFT window maximum against a direct double loop.
    const Grid2D g(16, 8.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field u(g);
    for (auto& v : u.values()) v = Complex(dist(rng), dist(rng));
    const double radius = 1.7;
    double best = 0.0;
    for (int c1 = 0; c1 < 16; ++c1)
      for (int c2 = 0; c2 < 16; ++c2) {
        double m = 0.0;
        for (int j1 = 0; j1 < 16; ++j1)
          for (int j2 = 0; j2 < 16; ++j2) {
            int d1 = ((j1 - c1) % 16 + 16) % 16, d2 = ((j2 - c2) % 16 + 16) % 16;
            if (d1 > 8) d1 -= 16;
            if (d2 > 8) d2 -= 16;
            if ((d1 * d1 + d2 * d2) * g.cell_area() <= radius * radius) m += std::norm(u(j1, j2));
          }
        best = std::max(best, m * g.cell_area());
      }
    const double fast = windowed_mass_sup(u, {WindowShape::kDisk, radius}).best_mass;
    add("windowed mass vs direct loop (rel)", std::abs(fast - best) / best, 1e-10);
  }
  if (p.nu == 1) {  // Ground state on a small grid: E(R) = 0 and equality in the sharp inequality.
    const GroundStateResult gs = solve_ground_state(Grid2D(128, 32.0), p);
    add("ground state residual", gs.residual, 1e-10);
    add("E(R) / |grad R|^2", std::abs(energy(gs.profile, p)) / gs.gradient_norm_sq, 1e-5);
    add("sharpness ratio vs c_opt (rel)", std::abs(gs.sharpness_ratio / gs.c_opt - 1.0), 1e-5);
  }

  bool all = true;
  out << std::left << std::setw(38) << "oracle" << std::setw(14) << "value" << std::setw(10) << "tol"
      << "result\n";
  for (const auto& r : rows) {
    std::ostringstream v, t;
    v << std::setprecision(3) << std::scientific << r.value;
    t << std::setprecision(0) << std::scientific << r.tolerance;
    out << std::left << std::setw(38) << r.name << std::setw(14) << v.str() << std::setw(10) << t.str()
        << (r.pass ? "PASS" : "FAIL") << "\n";
    all = all && r.pass;
  }
  return all;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudo-spectral lab for the elliptic-elliptic Davey-Stewartson equation", "dsbu"};
  app.require_subcommand(1);
  std::string config_path;
  auto* gs = app.add_subcommand("ground-state", "compute R and c_opt = 2/|R|^2");
  gs->add_option("config", config_path, "config file")->required();
  auto* ev = app.add_subcommand("evolve", "run the split-step solver");
  ev->add_option("config", config_path, "config file")->required();
  auto* an = app.add_subcommand("analyze", "windowed-mass diagnostics on saved snapshots");
  an->add_option("config", config_path, "config file")->required();
  auto* ve = app.add_subcommand("verify", "print the oracle table");
  ve->add_option("config", config_path, "optional config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*gs) {
      command_ground_state(load_config(config_path, Mode::kGroundState), out);
    } else if (*ev) {
      command_evolve(load_config(config_path, Mode::kEvolve), out);
    } else if (*an) {
      command_analyze(load_config(config_path, Mode::kAnalyze), out);
    } else {
      const RunConfig cfg = config_path.empty() ? parse_config("", Mode::kVerify)
                                                : load_config(config_path, Mode::kVerify);
      if (!command_verify(cfg, out)) {
        err << "error: oracle check failed\n";
        return 1;
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace dsbu
