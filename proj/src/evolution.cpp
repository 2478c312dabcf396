#include "dsbu/evolution.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dsbu/fft.hpp"

namespace dsbu {

SplitStepper::SplitStepper(const Grid2D& grid, const OperatorParams& p, StepperOptions opts)
    : grid_(grid), params_(p), opts_(opts), work_(grid.size()) {
  p.validate();
  l_symbol_ = l_symbol_table(grid, p);
  const int n = grid.n();
  if (opts_.dealias) {
    const int cutoff = n / 3;
    for (int j1 = 0; j1 < n; ++j1) {
      for (int j2 = 0; j2 < n; ++j2) {
        if (std::abs(grid.signed_mode(j1)) > cutoff || std::abs(grid.signed_mode(j2)) > cutoff) {
          l_symbol_[grid.index(j1, j2)] = 0.0;
        }
      }
    }
  }
  k2_1d_.resize(n);
  phase_1d_.resize(n);
  for (int j = 0; j < n; ++j) k2_1d_[j] = grid.wavenumber(j) * grid.wavenumber(j);
  phases(0.0);
}

void SplitStepper::phases(double tau) {
  phase_tau_ = tau;
  for (std::size_t j = 0; j < k2_1d_.size(); ++j) phase_1d_[j] = std::polar(1.0, -k2_1d_[j] * tau);
}

void SplitStepper::linear(Field& u, double tau) {
  require_same_grid(u.grid(), grid_, "SplitStepper::linear");
  if (tau != phase_tau_) phases(tau);
  const int n = grid_.n();
  u.transform_to(Space::kSpectral);
  auto v = u.values();
  for (int j1 = 0; j1 < n; ++j1) {
    const Complex a = phase_1d_[j1];
    for (int j2 = 0; j2 < n; ++j2) v[grid_.index(j1, j2)] *= a * phase_1d_[j2];
  }
  u.transform_to(Space::kPhysical);
}

void SplitStepper::nonlinear(Field& u, double tau) {
  require_same_grid(u.grid(), grid_, "SplitStepper::nonlinear");
  auto v = u.values();
  for (std::size_t i = 0; i < v.size(); ++i) work_[i] = std::norm(v[i]);
  apply_real_multiplier(work_, l_symbol_, grid_.n());
  double vmax = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double pot = work_[i];
    vmax = std::max(vmax, std::abs(pot));
    const double phase = tau * pot;
    v[i] *= Complex(std::cos(phase), std::sin(phase));
  }
  last_potential_max_ = vmax;
}

double SplitStepper::potential_max(const Field& u) {
  auto v = u.values();
  for (std::size_t i = 0; i < v.size(); ++i) work_[i] = std::norm(v[i]);
  apply_real_multiplier(work_, l_symbol_, grid_.n());
  double vmax = 0.0;
  for (double w : work_) vmax = std::max(vmax, std::abs(w));
  return vmax;
}

double SplitStepper::step(Field& u, double dt) {
  if (!u.is_physical()) throw UsageError("SplitStepper::step expects a physical field");
  linear(u, 0.5 * dt);
  nonlinear(u, dt);

  // Final half step done by hand so |grad u|^2 can be read off the spectrum.
  const double tau = 0.5 * dt;
  if (tau != phase_tau_) phases(tau);
  const int n = grid_.n();
  u.transform_to(Space::kSpectral);
  auto v = u.values();
  double grad = 0.0;
  for (int j1 = 0; j1 < n; ++j1) {
    const Complex a = phase_1d_[j1];
    for (int j2 = 0; j2 < n; ++j2) {
      auto& c = v[grid_.index(j1, j2)];
      c *= a * phase_1d_[j2];
      grad += (k2_1d_[j1] + k2_1d_[j2]) * std::norm(c);
    }
  }
  u.transform_to(Space::kPhysical);
  return grad * grid_.cell_area() / static_cast<double>(grid_.size());
}

SimulationState strang_step(const SimulationState& s, double dt, StepperOptions opts) {
  if (!(dt > 0.0)) throw UsageError("strang_step: dt must be positive");
  if (!s.u.is_physical()) throw UsageError("strang_step: state must hold a physical field");
  SplitStepper stepper(s.u.grid(), s.params, opts);
  SimulationState next = s;
  const double l4_before = l4_norm_4(s.u);
  stepper.step(next.u, dt);
  if (!next.u.all_finite()) throw StepOverflow("strang_step produced non-finite values", s);
  next.t = s.t + dt;
  next.step_index = s.step_index + 1;
  next.l4_accum = s.l4_accum + 0.5 * dt * (l4_before + l4_norm_4(next.u));
  return next;
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::kEndTime: return "end_time";
    case StopReason::kSupGuard: return "sup_guard";
    case StopReason::kGradientGuard: return "gradient_guard";
    case StopReason::kNonFinite: return "non_finite";
    case StopReason::kMaxSteps: return "max_steps";
  }
  return "unknown";
}

ConservationRecord make_record(const SimulationState& s, double dt_used, double moment_decay_tol) {
  ConservationRecord r;
  r.t = s.t;
  r.mass = mass(s.u);
  r.gradient_norm_sq = gradient_norm_sq(s.u);
  r.energy = 0.5 * r.gradient_norm_sq - 0.25 * quartic_term(s.u, s.params);
  const auto m = second_moment(s.u, moment_decay_tol);
  r.second_moment = m.value;
  r.moment_valid = m.valid;
  r.sup_abs = s.u.max_abs();
  r.l4_accum = s.l4_accum;
  r.dt_used = dt_used;
  return r;
}

RunResult run(const SimulationState& s0, const EvolveConfig& cfg) {
  s0.params.validate();
  if (!s0.u.is_physical()) throw UsageError("run: initial field must be physical");
  if (!s0.u.all_finite()) throw UsageError("run: initial field has non-finite values");
  if (!(cfg.t_end > s0.t)) throw UsageError("run: t_end must exceed the initial time");
  if (cfg.dt0 < 0.0 || cfg.sample_interval < 0.0 || !(cfg.c_adapt > 0.0)) {
    throw UsageError("run: dt0, sample_interval must be >= 0 and c_adapt > 0");
  }

  const Grid2D& grid = s0.u.grid();
  const double dt0 = cfg.dt0 > 0.0 ? cfg.dt0 : 0.25 * grid.cell_area();
  const double sup_guard = cfg.sup_guard > 0.0 ? cfg.sup_guard : 0.5 / grid.dx();
  const double grad_guard = cfg.gradient_guard > 0.0 ? cfg.gradient_guard : sup_guard * sup_guard;
  const double t_eps = 1e-12 * std::max(1.0, std::abs(cfg.t_end));

  SplitStepper stepper(grid, s0.params, cfg.stepper);
  RunResult out{.final_state = s0, .records = {}, .reason = StopReason::kEndTime, .estimate = {}};
  SimulationState& s = out.final_state;

  auto sample = [&](double dt_used) {
    out.records.push_back(make_record(s, dt_used, cfg.moment_decay_tol));
    if (cfg.on_sample) cfg.on_sample(s);
  };
  sample(0.0);

  const long every = (!cfg.adaptive && cfg.sample_interval > 0.0)
                         ? std::max(1L, std::lround(cfg.sample_interval / dt0))
                         : 0;
  double next_sample = cfg.sample_interval > 0.0 ? s0.t + cfg.sample_interval : cfg.t_end;
  double potential = cfg.adaptive ? stepper.potential_max(s.u) : 0.0;
  double l4_now = l4_norm_4(s.u);
  long taken = 0;
  double dt_last = 0.0;
  bool sampled_last = true;

  while (true) {
    const double remaining = cfg.t_end - s.t;
    if (remaining <= t_eps) break;
    if (taken >= cfg.max_steps) {
      out.reason = StopReason::kMaxSteps;
      break;
    }
    double dt = std::min(dt0, remaining);
    if (cfg.adaptive) {
      if (potential > 0.0) dt = std::min(dt, cfg.c_adapt / potential);
      if (cfg.sample_interval > 0.0) dt = std::min(dt, next_sample - s.t);
    }

    Field backup = s.u;
    const double grad = stepper.step(s.u, dt);
    if (!s.u.all_finite() || !std::isfinite(grad)) {
      s.u = std::move(backup);
      out.reason = StopReason::kNonFinite;
      break;
    }
    ++taken;
    ++s.step_index;
    potential = stepper.last_potential_max();
    // Fixed steps: t from the step count so long runs do not accumulate drift.
    s.t = (!cfg.adaptive && dt == dt0) ? s0.t + static_cast<double>(taken) * dt0 : s.t + dt;
    if (cfg.t_end - s.t <= t_eps) s.t = std::max(s.t, cfg.t_end);
    const double l4_next = l4_norm_4(s.u);
    s.l4_accum += 0.5 * dt * (l4_now + l4_next);
    l4_now = l4_next;
    dt_last = dt;

    sampled_last = false;
    if (every > 0 ? taken % every == 0
                  : (cfg.sample_interval > 0.0 && next_sample - s.t <= t_eps)) {
      sample(dt);
      sampled_last = true;
      while (next_sample - s.t <= t_eps) next_sample += cfg.sample_interval;
    }

    if (s.u.max_abs() > sup_guard) {
      out.reason = StopReason::kSupGuard;
      break;
    }
    if (grad > grad_guard) {
      out.reason = StopReason::kGradientGuard;
      break;
    }
  }
  if (!sampled_last) sample(dt_last);

  if (out.reason == StopReason::kSupGuard || out.reason == StopReason::kGradientGuard ||
      out.reason == StopReason::kNonFinite) {
    try {
      out.estimate = estimate_t_star(out.records);
    } catch (const DomainError&) {
      out.estimate.reset();
    }
  }
  return out;
}

BlowupEstimate estimate_t_star(const std::vector<ConservationRecord>& records, std::size_t window) {
  constexpr std::size_t kMinRecords = 8;
  constexpr double kGrowth = 10.0;
  if (records.empty()) throw DomainError("no blow-up regime detected");
  const double g0 = records.front().gradient_norm_sq;
  std::vector<const ConservationRecord*> terminal;
  for (const auto& r : records) {
    if (r.gradient_norm_sq >= kGrowth * g0) terminal.push_back(&r);
  }
  if (terminal.size() < kMinRecords) throw DomainError("no blow-up regime detected");
  window = std::max(window, kMinRecords);
  if (terminal.size() > window) terminal.erase(terminal.begin(), terminal.end() - static_cast<long>(window));

  const auto m = static_cast<Eigen::Index>(terminal.size());
  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = terminal[i]->t;
    y(i) = 1.0 / terminal[i]->gradient_norm_sq;
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(y);
  if (!(c(1) < 0.0)) throw DomainError("no blow-up regime detected (1/grad_sq not decreasing)");

  BlowupEstimate e;
  e.method = "inverse_grad_sq_linear";
  e.slope = -c(1);
  e.t_star = -c(0) / c(1);
  e.fit_t_begin = terminal.front()->t;
  e.fit_t_end = terminal.back()->t;
  const Eigen::VectorXd resid = a * c - y;
  e.fit_residual = std::sqrt(resid.squaredNorm() / static_cast<double>(m)) / y.mean();
  return e;
}

VirialFit virial_check(const std::vector<ConservationRecord>& records, double e0) {
  if (records.size() < 5) throw DomainError("virial_check needs at least 5 records");
  for (const auto& r : records) {
    if (!r.moment_valid) {
      std::ostringstream os;
      os << "second moment invalid (boundary contamination) at t = " << r.t;
      throw DomainError(os.str());
    }
  }
  // Fit in a shifted/scaled time variable for conditioning.
  const double ta = records.front().t;
  const double span = std::max(records.back().t - ta, 1e-300);
  const auto m = static_cast<Eigen::Index>(records.size());
  Eigen::MatrixXd a(m, 3);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = (records[i].t - ta) / span;
    a(i, 0) = 1.0;
    a(i, 1) = s;
    a(i, 2) = s * s;
    y(i) = records[i].second_moment;
  }
  const Eigen::Vector3d c = a.colPivHouseholderQr().solve(y);
  // Back to V = c2 t^2 + c1 t + c0.
  const double b2 = c(2) / (span * span);
  const double b1 = c(1) / span;
  VirialFit f;
  f.c2 = b2;
  f.c1 = b1 - 2.0 * b2 * ta;
  f.c0 = c(0) - b1 * ta + b2 * ta * ta;
  f.expected_leading = 4.0 * e0;
  f.leading_coeff_error = std::abs(f.c2 - f.expected_leading) / std::max(std::abs(f.expected_leading), 1e-300);
  f.lead_over_energy = e0 != 0.0 ? f.c2 / e0 : 0.0;
  f.fit_rms = std::sqrt((a * c - y).squaredNorm() / static_cast<double>(m));
  return f;
}

}  // namespace dsbu
