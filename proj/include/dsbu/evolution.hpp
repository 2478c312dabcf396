#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dsbu/error.hpp"
#include "dsbu/field.hpp"
#include "dsbu/spectral.hpp"

namespace dsbu {

struct SimulationState {
  double t = 0.0;
  Field u;
  long step_index = 0;
  double l4_accum = 0.0;  ///< int_0^t int |u|^4 dx ds, trapezoid in time
  OperatorParams params;
};

struct ConservationRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double gradient_norm_sq = 0.0;
  double second_moment = 0.0;
  bool moment_valid = true;
  double sup_abs = 0.0;
  double l4_accum = 0.0;
  double dt_used = 0.0;
};

struct BlowupEstimate {
  double t_star = 0.0;
  std::string method;
  double fit_t_begin = 0.0;
  double fit_t_end = 0.0;
  double fit_residual = 0.0;  ///< rms misfit of 1/grad_sq relative to its mean over the window
  double slope = 0.0;         ///< fitted a in 1/grad_sq = a (T* - t)
};

/// A step produced non-finite values; carries the last finite state.
class StepOverflow : public DomainError {
 public:
  StepOverflow(const std::string& what, SimulationState last)
      : DomainError(what), last_(std::move(last)) {}
  const SimulationState& last_finite() const { return last_; }

 private:
  SimulationState last_;
};

struct StepperOptions {
  bool dealias = false;  ///< 2/3-rule truncation of |u|^2 before L is applied
};

/// Strang splitting Lin(dt/2) Nonlin(dt) Lin(dt/2) for i u_t + Delta u + L(|u|^2) u = 0.
///
/// Lin is the exact free flow u^ <- exp(-i |xi|^2 tau) u^, Nonlin the exact
/// pointwise phase rotation u <- exp(i tau L(|u|^2)) u. Both are unitary, so
/// the scheme conserves mass to roundoff and is time reversible.
/// Holds precomputed symbol tables and a work buffer: one instance per thread.
class SplitStepper {
 public:
  SplitStepper(const Grid2D& grid, const OperatorParams& p, StepperOptions opts = {});

  const Grid2D& grid() const { return grid_; }
  const OperatorParams& params() const { return params_; }

  void linear(Field& u, double tau);
  void nonlinear(Field& u, double tau);

  /// One full step of signed size dt applied in place. Returns |grad u|^2
  /// at the end of the step (read off the last spectral stage).
  double step(Field& u, double dt);

  /// Largest |L(|u|^2)| seen by the most recent nonlinear stage.
  double last_potential_max() const { return last_potential_max_; }

  /// max |L(|u|^2)| for an arbitrary field.
  double potential_max(const Field& u);

 private:
  void phases(double tau);

  Grid2D grid_;
  OperatorParams params_;
  StepperOptions opts_;
  std::vector<double> l_symbol_;
  std::vector<double> k2_1d_;
  std::vector<Complex> phase_1d_;
  double phase_tau_ = 0.0;
  std::vector<double> work_;
  double last_potential_max_ = 0.0;
};

/// Advances the state by dt > 0. Throws UsageError for dt <= 0 or a spectral
/// field and StepOverflow if the result is not finite.
SimulationState strang_step(const SimulationState& s, double dt, StepperOptions opts = {});

enum class StopReason { kEndTime, kSupGuard, kGradientGuard, kNonFinite, kMaxSteps };
std::string to_string(StopReason r);

struct EvolveConfig {
  double t_end = 1.0;
  double dt0 = 0.0;             ///< 0 selects 0.25 dx^2
  bool adaptive = false;        ///< dt = min(dt0, c_adapt / max|L(|u|^2)|)
  double c_adapt = 0.1;
  double sample_interval = 0.0; ///< 0 records only the initial and final states
  double sup_guard = 0.0;       ///< 0 selects 0.5 / dx
  double gradient_guard = 0.0;  ///< 0 selects sup_guard^2 (compared with grad_sq)
  long max_steps = 100'000'000;
  double moment_decay_tol = 1e-10;
  StepperOptions stepper;
  /// Called with the state at every sampling instant (including t0 and the end).
  std::function<void(const SimulationState&)> on_sample;
};

struct RunResult {
  SimulationState final_state;
  std::vector<ConservationRecord> records;
  StopReason reason = StopReason::kEndTime;
  std::optional<BlowupEstimate> estimate;  ///< set when a guard fired and a fit was possible
};

ConservationRecord make_record(const SimulationState& s, double dt_used, double moment_decay_tol = 1e-10);

/// Integrates from s0 until t_end or a stop criterion. Throws UsageError on an
/// invalid configuration; non-finite values end the run with kNonFinite and
/// the last finite state rather than an exception.
RunResult run(const SimulationState& s0, const EvolveConfig& cfg);

/// Least-squares fit 1/grad_sq(t) = a (T* - t) on the terminal regime
/// (records whose grad_sq is at least 10x the first one), using the last
/// `window` of them. Throws DomainError "no blow-up regime detected" when
/// fewer than 8 such records exist.
BlowupEstimate estimate_t_star(const std::vector<ConservationRecord>& records, std::size_t window = 8);

struct VirialFit {
  double c2 = 0.0;  ///< t^2 coefficient
  double c1 = 0.0;
  double c0 = 0.0;
  double expected_leading = 0.0;  ///< 4 E(u0), as the identity is usually quoted
  double leading_coeff_error = 0.0;
  double lead_over_energy = 0.0;  ///< c2 / E(u0)
  double fit_rms = 0.0;
};

/// Quadratic least-squares fit of the second moment against t. Requires at
/// least 5 records, all with a valid moment (DomainError naming the first
/// invalid time otherwise).
VirialFit virial_check(const std::vector<ConservationRecord>& records, double e0);

}  // namespace dsbu
