#include "dsbu/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "dsbu/error.hpp"
#include "dsbu/grid.hpp"

namespace dsbu {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::kGroundState: return "ground-state";
    case Mode::kEvolve: return "evolve";
    case Mode::kAnalyze: return "analyze";
    case Mode::kVerify: return "verify";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "ground-state") return Mode::kGroundState;
  if (s == "evolve") return Mode::kEvolve;
  if (s == "analyze") return Mode::kAnalyze;
  if (s == "verify") return Mode::kVerify;
  return std::nullopt;
}

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::kGaussian: return "gaussian";
    case InitialKind::kNegativeEnergy: return "negative_energy";
    case InitialKind::kSnapshot: return "snapshot";
    case InitialKind::kStandingWave: return "standing_wave";
    case InitialKind::kPcBlowup: return "pc_blowup";
  }
  return "unknown";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Thrown inside a setter; the parser adds the line number.
struct ValueError {
  std::string message;
};

double to_double(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ValueError{"expected a finite number, got '" + std::string(v) + "'"};
  }
  return out;
}

long to_long(std::string_view v) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ValueError{"expected an integer, got '" + std::string(v) + "'"};
  }
  return out;
}

bool to_bool(std::string_view v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ValueError{"expected true or false, got '" + std::string(v) + "'"};
}

double positive(std::string_view v, const char* what) {
  const double x = to_double(v);
  if (!(x > 0.0)) throw ValueError{std::string(what) + " must be positive"};
  return x;
}

double nonnegative(std::string_view v, const char* what) {
  const double x = to_double(v);
  if (x < 0.0) throw ValueError{std::string(what) + " must be nonnegative"};
  return x;
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"mode", [](RunConfig& c, std::string_view v) {
         const auto m = parse_mode(v);
         if (!m) throw ValueError{"unknown mode '" + std::string(v) + "'"};
         c.mode = *m;
       }},
      {"n", [](RunConfig& c, std::string_view v) {
         const long n = to_long(v);
         if (n < 8 || n > (1L << 14) || (n & (n - 1)) != 0) {
           throw ValueError{"n must be a power of two between 8 and 16384"};
         }
         c.n = static_cast<int>(n);
       }},
      {"box_length", [](RunConfig& c, std::string_view v) { c.box_length = positive(v, "box_length"); }},
      {"nu", [](RunConfig& c, std::string_view v) {
         const long nu = to_long(v);
         if (nu != 1 && nu != -1) throw ValueError{"nu must be ±1"};
         c.params.nu = static_cast<int>(nu);
       }},
      {"gamma", [](RunConfig& c, std::string_view v) { c.params.gamma = positive(v, "gamma"); }},
      {"zero_mode", [](RunConfig& c, std::string_view v) {
         const double z = to_double(v);
         if (z < 0.0 || z > 1.0) throw ValueError{"zero_mode must lie in [0, 1]"};
         c.params.zero_mode = z;
       }},
      {"initial", [](RunConfig& c, std::string_view v) {
         for (InitialKind k : {InitialKind::kGaussian, InitialKind::kNegativeEnergy, InitialKind::kSnapshot,
                               InitialKind::kStandingWave, InitialKind::kPcBlowup}) {
           if (v == to_string(k)) {
             c.initial = k;
             return;
           }
         }
         throw ValueError{"unknown initial condition '" + std::string(v) + "'"};
       }},
      {"amplitude", [](RunConfig& c, std::string_view v) { c.amplitude = positive(v, "amplitude"); }},
      {"width_x1", [](RunConfig& c, std::string_view v) { c.width_x1 = positive(v, "width_x1"); }},
      {"width_x2", [](RunConfig& c, std::string_view v) { c.width_x2 = positive(v, "width_x2"); }},
      {"snapshot_path", [](RunConfig& c, std::string_view v) { c.snapshot_path = std::string(v); }},
      {"pc_t0", [](RunConfig& c, std::string_view v) {
         const double t = to_double(v);
         if (!(t >= -1.0 && t < 0.0)) throw ValueError{"pc_t0 must lie in [-1, 0)"};
         c.pc_t0 = t;
       }},
      {"t_end", [](RunConfig& c, std::string_view v) { c.t_end = to_double(v); }},
      {"dt0", [](RunConfig& c, std::string_view v) { c.dt0 = positive(v, "dt0"); }},
      {"adaptive", [](RunConfig& c, std::string_view v) { c.adaptive = to_bool(v); }},
      {"c_adapt", [](RunConfig& c, std::string_view v) { c.c_adapt = positive(v, "c_adapt"); }},
      {"dealias", [](RunConfig& c, std::string_view v) { c.dealias = to_bool(v); }},
      {"sample_interval", [](RunConfig& c, std::string_view v) { c.sample_interval = nonnegative(v, "sample_interval"); }},
      {"sup_guard", [](RunConfig& c, std::string_view v) { c.sup_guard = positive(v, "sup_guard"); }},
      {"gradient_guard", [](RunConfig& c, std::string_view v) { c.gradient_guard = positive(v, "gradient_guard"); }},
      {"max_steps", [](RunConfig& c, std::string_view v) {
         c.max_steps = to_long(v);
         if (c.max_steps <= 0) throw ValueError{"max_steps must be positive"};
       }},
      {"snapshot_stride", [](RunConfig& c, std::string_view v) {
         const long k = to_long(v);
         if (k < 0) throw ValueError{"snapshot_stride must be nonnegative"};
         c.snapshot_stride = static_cast<int>(k);
       }},
      {"gs_n", [](RunConfig& c, std::string_view v) {
         const long n = to_long(v);
         if (n < 8 || n > (1L << 14) || (n & (n - 1)) != 0) {
           throw ValueError{"gs_n must be a power of two between 8 and 16384"};
         }
         c.gs_n = static_cast<int>(n);
       }},
      {"gs_box_length", [](RunConfig& c, std::string_view v) { c.gs_box_length = positive(v, "gs_box_length"); }},
      {"gs_tol", [](RunConfig& c, std::string_view v) { c.gs_tol = positive(v, "gs_tol"); }},
      {"gs_max_iterations", [](RunConfig& c, std::string_view v) {
         const long k = to_long(v);
         if (k <= 0) throw ValueError{"gs_max_iterations must be positive"};
         c.gs_max_iterations = static_cast<int>(k);
       }},
      {"c_opt", [](RunConfig& c, std::string_view v) { c.c_opt = positive(v, "c_opt"); }},
      {"input_dir", [](RunConfig& c, std::string_view v) { c.input_dir = std::string(v); }},
      {"schedule", [](RunConfig& c, std::string_view v) {
         if (v == "parabolic") {
           c.schedule = LambdaKind::kParabolicMinusEps;
         } else if (v == "conic") {
           c.schedule = LambdaKind::kConic;
         } else {
           throw ValueError{"schedule must be parabolic or conic"};
         }
       }},
      {"epsilon", [](RunConfig& c, std::string_view v) {
         const double e = to_double(v);
         if (!(e > 0.0 && e < 0.5)) throw ValueError{"epsilon must lie in (0, 1/2)"};
         c.epsilon = e;
       }},
      {"c_side", [](RunConfig& c, std::string_view v) { c.c_side = positive(v, "c_side"); }},
      {"eta", [](RunConfig& c, std::string_view v) { c.eta = nonnegative(v, "eta"); }},
      {"t_star", [](RunConfig& c, std::string_view v) { c.t_star = to_double(v); }},
      {"output_dir", [](RunConfig& c, std::string_view v) { c.output_dir = std::string(v); }},
  };
  return table;
}

void require(const std::set<std::string, std::less<>>& seen, const char* key, const RunConfig& c,
             const char* why = nullptr) {
  if (seen.count(key)) return;
  std::string msg = "missing required key '" + std::string(key) + "' for mode " + to_string(c.mode);
  if (why) msg += std::string(" (") + why + ")";
  throw UsageError(msg);
}

}  // namespace

RunConfig parse_config(std::string_view text, std::optional<Mode> mode) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto fail = [&](const std::string& msg) {
      std::ostringstream os;
      os << "line " << line_no << ": " << msg;
      throw UsageError(os.str());
    };
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) fail("missing key");
    const auto it = setters().find(key);
    if (it == setters().end()) fail("unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) fail("duplicate key '" + std::string(key) + "'");
    if (value.empty()) fail("missing value for '" + std::string(key) + "'");
    try {
      it->second(cfg, value);
    } catch (const ValueError& e) {
      fail(e.message);
    }
  }

  if (seen.count("mode")) {
    if (mode && *mode != cfg.mode) {
      throw UsageError("config is for mode " + to_string(cfg.mode) + " but was run as " + to_string(*mode));
    }
  } else if (mode) {
    cfg.mode = *mode;
  } else {
    throw UsageError("missing required key 'mode'");
  }

  if (cfg.mode == Mode::kGroundState) {
    // The ground-state subcommand takes its grid from n / box_length when given.
    if (seen.count("n")) cfg.gs_n = cfg.n;
    if (seen.count("box_length")) cfg.gs_box_length = cfg.box_length;
  }
  if (cfg.mode == Mode::kEvolve) {
    require(seen, "initial", cfg);
    require(seen, "t_end", cfg);
    if (cfg.initial == InitialKind::kSnapshot) require(seen, "snapshot_path", cfg, "initial = snapshot");
    if (cfg.initial == InitialKind::kPcBlowup) {
      require(seen, "pc_t0", cfg, "initial = pc_blowup");
      if (!(cfg.t_end > cfg.pc_t0)) throw UsageError("t_end must exceed pc_t0");
    } else if (cfg.initial != InitialKind::kSnapshot && !(cfg.t_end > 0.0)) {
      throw UsageError("t_end must be positive");
    }
  }
  if (cfg.mode == Mode::kAnalyze) require(seen, "input_dir", cfg);

  const double dx = cfg.box_length / cfg.n;
  cfg.dt0_given = seen.count("dt0") > 0;
  if (!cfg.dt0_given) cfg.dt0 = 0.25 * dx * dx;
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, std::optional<Mode> mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  RunConfig cfg;
  try {
    cfg = parse_config(buf.str(), mode);
  } catch (const UsageError& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();
  if (!cfg.snapshot_path.empty() && cfg.snapshot_path.is_relative()) cfg.snapshot_path = base / cfg.snapshot_path;
  if (!cfg.input_dir.empty() && cfg.input_dir.is_relative()) cfg.input_dir = base / cfg.input_dir;
  return cfg;
}

}  // namespace dsbu
