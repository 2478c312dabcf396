#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dsbu/error.hpp"
#include "dsbu/evolution.hpp"
#include "dsbu/ground_state.hpp"
#include "dsbu/initial_data.hpp"
#include "test_support.hpp"

using namespace dsbu;
using namespace dsbu::testing;
using std::numbers::pi;

namespace {

const OperatorParams kFocusing{1, 1.0};

SimulationState state_of(Field u, OperatorParams p = kFocusing) {
  return SimulationState{.t = 0.0, .u = std::move(u), .step_index = 0, .l4_accum = 0.0, .params = p};
}

// Error of the fixed-step solution at t = 1 against R e^{it}.
double standing_wave_error(const Field& R, int steps) {
  SplitStepper stepper(R.grid(), kFocusing);
  Field u = R;
  const double dt = 1.0 / steps;
  for (int k = 0; k < steps; ++k) stepper.step(u, dt);
  Field exact = R;
  exact *= std::polar(1.0, 1.0);
  return (u - exact).l2_norm() / R.l2_norm();
}

double energy_drift(const Field& u0, double dt, int steps) {
  SplitStepper stepper(u0.grid(), kFocusing);
  Field u = u0;
  const double e0 = energy(u0, kFocusing);
  double worst = 0.0;
  for (int k = 0; k < steps; ++k) {
    stepper.step(u, dt);
    worst = std::max(worst, std::abs(energy(u, kFocusing) - e0));
  }
  return worst / std::abs(e0);
}

ConservationRecord record_at(double t, double grad_sq) {
  ConservationRecord r;
  r.t = t;
  r.gradient_norm_sq = grad_sq;
  return r;
}

}  // namespace

TEST_CASE("zero field stays zero") {
  const Grid2D g(32, 10.0);
  SplitStepper stepper(g, kFocusing);
  Field u(g);
  for (int k = 0; k < 10; ++k) CHECK(stepper.step(u, 0.01) == 0.0);
  CHECK(u.max_abs() == 0.0);
}

TEST_CASE("constant field rotates at the rate set by L applied to a constant") {
  const Grid2D g(32, 10.0);
  const double a = 0.7, t = 0.5;
  for (double zero_mode : {0.0, kDefaultZeroMode}) {
    const OperatorParams p{1, 1.0, zero_mode};
    SplitStepper stepper(g, p);
    Field u = Field::sample(g, [&](double, double) { return a; });
    const int steps = 50;
    for (int k = 0; k < steps; ++k) stepper.step(u, t / steps);
    const Complex expected = a * std::polar(1.0, (1.0 + zero_mode) * a * a * t);
    double err = 0.0;
    for (const auto& v : u.values()) err = std::max(err, std::abs(v - expected));
    CHECK(err <= 1e-12);
  }
}

TEST_CASE("standing wave propagates with second-order error") {
  const auto gs = solve_ground_state(Grid2D(128, 32.0), kFocusing);
  const double e512 = standing_wave_error(gs.profile, 512);
  const double e1024 = standing_wave_error(gs.profile, 1024);
  MESSAGE("standing wave errors " << e512 << " " << e1024 << " ratio " << e512 / e1024);
  // The splitting error constant of this profile puts dt = 2^-10 just above 1e-5.
  CHECK(e1024 <= 1.5e-5);
  CHECK(e512 / e1024 >= 3.5);
  CHECK(e512 / e1024 <= 4.5);
}

TEST_CASE("splitting conserves mass and preserves modulus in the nonlinear stage") {
  const Grid2D g(128, 16.0);
  const Field u0 = gaussian_profile(g, 1.2);
  SplitStepper stepper(g, kFocusing);
  Field u = u0;
  for (int k = 0; k < 200; ++k) stepper.step(u, 0.25 * g.cell_area());
  CHECK(std::abs(mass(u) - mass(u0)) <= 1e-12 * mass(u0));

  Field w = random_complex(g, 3);
  const Field before = w;
  stepper.nonlinear(w, 0.3);
  double err = 0.0;
  for (std::size_t i = 0; i < w.values().size(); ++i) {
    err = std::max(err, std::abs(std::abs(w.values()[i]) - std::abs(before.values()[i])));
  }
  CHECK(err <= 1e-14 * before.max_abs());
}

TEST_CASE("a step followed by its negative is the identity") {
  const Grid2D g(64, 12.0);
  SplitStepper stepper(g, kFocusing);
  const Field u0 = gaussian_profile(g, 1.5, 1.0, 1.3, 0.4, -0.2);
  Field u = u0;
  stepper.step(u, 0.01);
  CHECK(max_abs_diff(u, u0) > 1e-4);
  stepper.step(u, -0.01);
  CHECK(max_abs_diff(u, u0) <= 1e-12 * u0.max_abs());
}

TEST_CASE("energy error is second order in dt") {
  const Grid2D g(128, 16.0);
  const Field u0 = gaussian_profile(g, 1.2);
  const double dt = 0.25 * g.cell_area();
  const double d1 = energy_drift(u0, dt, 400);
  const double d2 = energy_drift(u0, 0.5 * dt, 800);
  MESSAGE("energy drift " << d1 << " " << d2 << " ratio " << d1 / d2);
  CHECK(d1 <= 1e-5);
  CHECK(d1 / d2 >= 3.5);
  CHECK(d1 / d2 <= 4.5);
}

TEST_CASE("strang_step contract") {
  const Grid2D g(32, 10.0);
  const SimulationState s = state_of(gaussian_profile(g, 1.0));
  CHECK_THROWS_AS(strang_step(s, 0.0, {}), UsageError);
  CHECK_THROWS_AS(strang_step(s, -0.1, {}), UsageError);
  SimulationState spectral = s;
  spectral.u.transform_to(Space::kSpectral);
  CHECK_THROWS_AS(strang_step(spectral, 0.1, {}), UsageError);

  const SimulationState next = strang_step(s, 0.01, {});
  CHECK(next.t == doctest::Approx(0.01));
  CHECK(next.step_index == 1);
  CHECK(next.l4_accum > 0.0);

  SimulationState bad = s;
  bad.u(3, 4) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  try {
    strang_step(bad, 0.01, {});
    FAIL("expected StepOverflow");
  } catch (const StepOverflow& e) {
    CHECK(e.last_finite().t == 0.0);
  }
}

TEST_CASE("dealiased stepper stays close to the plain one on smooth data") {
  const Grid2D g(64, 16.0);
  SplitStepper plain(g, kFocusing), dealiased(g, kFocusing, {.dealias = true});
  Field a = gaussian_profile(g, 1.0), b = a;
  for (int k = 0; k < 20; ++k) {
    plain.step(a, 0.01);
    dealiased.step(b, 0.01);
  }
  CHECK(max_abs_diff(a, b) <= 1e-5 * a.max_abs());
  CHECK(std::abs(mass(b) - mass(a)) <= 1e-12 * mass(a));
}

TEST_CASE("run samples, records and stops") {
  const Grid2D g(64, 16.0);
  const SimulationState s0 = state_of(gaussian_profile(g, 1.0));

  EvolveConfig cfg;
  cfg.t_end = 0.1;
  cfg.dt0 = 0.005;
  cfg.sample_interval = 0.02;
  int callbacks = 0;
  cfg.on_sample = [&](const SimulationState&) { ++callbacks; };
  const RunResult r = run(s0, cfg);
  CHECK(r.reason == StopReason::kEndTime);
  REQUIRE(r.records.size() == 6);
  CHECK(callbacks == 6);
  CHECK(r.records.front().t == 0.0);
  CHECK(r.records.back().t == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(r.final_state.step_index == 20);
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    CHECK(r.records[i].l4_accum >= r.records[i - 1].l4_accum);
    CHECK(r.records[i].t > r.records[i - 1].t);
  }
  CHECK_FALSE(r.estimate.has_value());

  EvolveConfig adaptive = cfg;
  adaptive.adaptive = true;
  const RunResult ra = run(s0, adaptive);
  CHECK(ra.reason == StopReason::kEndTime);
  CHECK(ra.records.size() == 6);
  for (const auto& rec : ra.records) CHECK(rec.dt_used <= cfg.dt0);

  EvolveConfig guard = cfg;
  guard.sup_guard = 0.5;
  CHECK(run(s0, guard).reason == StopReason::kSupGuard);
  guard = cfg;
  guard.gradient_guard = 1e-3;
  const RunResult rg = run(s0, guard);
  CHECK(rg.reason == StopReason::kGradientGuard);
  CHECK(rg.final_state.step_index == 1);
  CHECK(rg.records.size() == 2);
  guard = cfg;
  guard.max_steps = 3;
  CHECK(run(s0, guard).reason == StopReason::kMaxSteps);

  EvolveConfig broken = cfg;
  broken.t_end = 0.0;
  CHECK_THROWS_AS(run(s0, broken), UsageError);
  broken = cfg;
  broken.c_adapt = 0.0;
  CHECK_THROWS_AS(run(s0, broken), UsageError);
}

TEST_CASE("estimate_t_star on synthetic traces") {
  std::vector<ConservationRecord> recs;
  for (int k = 0; k <= 40; ++k) {
    const double t = 1.0 - std::pow(10.0, -k / 10.0);
    recs.push_back(record_at(t, 1.0 / (1.0 - t)));
  }
  const BlowupEstimate e = estimate_t_star(recs);
  CHECK(e.t_star == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(e.slope == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(e.method == "inverse_grad_sq_linear");
  CHECK(e.fit_t_end == recs.back().t);
  CHECK(e.fit_residual <= 1e-8);

  std::vector<ConservationRecord> global;
  for (int k = 0; k < 50; ++k) global.push_back(record_at(0.1 * k, 2.0 + 0.01 * std::sin(k)));
  try {
    estimate_t_star(global);
    FAIL("expected a DomainError");
  } catch (const DomainError& err) {
    CHECK(std::string(err.what()).find("no blow-up regime detected") != std::string::npos);
  }
  CHECK_THROWS_AS(estimate_t_star({}), DomainError);
}

TEST_CASE("virial_check fits a quadratic") {
  std::vector<ConservationRecord> recs;
  for (int k = 0; k < 11; ++k) {
    ConservationRecord r;
    r.t = 0.1 * k;
    r.second_moment = 3.0 * r.t * r.t + 2.0 * r.t + 1.0;
    recs.push_back(r);
  }
  const VirialFit f = virial_check(recs, 0.75);
  CHECK(f.c2 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.c1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.c0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.expected_leading == 3.0);
  CHECK(f.leading_coeff_error <= 1e-12);
  CHECK(f.fit_rms <= 1e-12);

  // A constant moment (standing wave) has zero leading coefficient.
  for (auto& r : recs) r.second_moment = 5.0;
  CHECK(std::abs(virial_check(recs, 0.0).c2) <= 1e-12);

  recs[4].moment_valid = false;
  try {
    virial_check(recs, 1.0);
    FAIL("expected a DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("t = 0.4") != std::string::npos);
  }
  recs.resize(4);
  CHECK_THROWS_AS(virial_check(recs, 1.0), DomainError);
}

TEST_CASE("second moment grows with leading coefficient 8 E") {
  // V'' = 8 |grad u|^2 - 4 int L(|u|^2)|u|^2 = 16 E.
  const Grid2D g(128, 24.0);
  for (double amp : {1e-6, 1.2}) {
    const SimulationState s0 = state_of(gaussian_profile(g, amp));
    EvolveConfig cfg;
    cfg.t_end = 0.2;
    cfg.dt0 = 0.0025;
    cfg.sample_interval = 0.01;
    const RunResult r = run(s0, cfg);
    REQUIRE(r.records.size() == 21);
    const double e0 = energy(s0.u, kFocusing);
    const VirialFit f = virial_check(r.records, e0);
    MESSAGE("amplitude " << amp << ": c2/E0 = " << f.lead_over_energy);
    CHECK(f.lead_over_energy == doctest::Approx(8.0).epsilon(1e-3));
    CHECK(f.expected_leading == 4.0 * e0);
  }
}

TEST_CASE("negative-energy initial data") {
  const Grid2D g(128, 64.0);
  const NegativeEnergyData d = negative_energy_gaussian(g, kFocusing);
  CHECK(d.energy < 0.0);
  CHECK(energy(d.u, kFocusing) == doctest::Approx(d.energy));
  CHECK_THROWS_AS(negative_energy_gaussian(g, OperatorParams{-1, 0.5}), DomainError);

  // Exists iff -nu < gamma; the search itself does not know the criterion.
  struct Case {
    int nu;
    double gamma;
  };
  for (const Case c : {Case{-1, 0.5}, Case{-1, 0.9}, Case{-1, 1.0}, Case{-1, 1.5}, Case{-1, 2.0},
                       Case{-1, 3.0}, Case{1, 0.1}, Case{1, 1.0}}) {
    const bool found = search_negative_energy(g, OperatorParams{c.nu, c.gamma}).has_value();
    CAPTURE(c.nu);
    CAPTURE(c.gamma);
    CHECK(found == (-c.nu < c.gamma));
  }
}

TEST_CASE("gaussian_profile samples the documented formula") {
  const Grid2D g(32, 8.0);
  const Field u = gaussian_profile(g, 2.0, 1.0, 2.0, 0.5, -1.0);
  const double x1 = g.coord(20), x2 = g.coord(7);
  const double expected = 2.0 * std::exp(-0.5 * (x1 - 0.5) * (x1 - 0.5) - (x2 + 1.0) * (x2 + 1.0) / 8.0);
  CHECK(u(20, 7).real() == doctest::Approx(expected).epsilon(1e-14));
  CHECK(u(20, 7).imag() == 0.0);
}
