#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "dsbu/error.hpp"
#include "dsbu/evolution.hpp"
#include "dsbu/exact_solutions.hpp"
#include "dsbu/ground_state.hpp"
#include "dsbu/interpolation.hpp"
#include "test_support.hpp"

using namespace dsbu;
using namespace dsbu::testing;
using std::numbers::pi;

namespace {

const OperatorParams kFocusing{1, 1.0};

const GroundStateResult& ground_state() {
  static const GroundStateResult r = solve_ground_state(Grid2D(256, 40.0), kFocusing);
  return r;
}

double second_moment_of(const Field& R) {
  double v = 0.0;
  const Grid2D& g = R.grid();
  for (int i1 = 0; i1 < g.n(); ++i1)
    for (int i2 = 0; i2 < g.n(); ++i2)
      v += (g.coord(i1) * g.coord(i1) + g.coord(i2) * g.coord(i2)) * std::norm(R(i1, i2));
  return v * g.cell_area();
}

}  // namespace

TEST_CASE("band-limited interpolation is exact on trigonometric polynomials") {
  const Grid2D g(16, 2.0 * pi);
  // Includes the Nyquist mode cos(8 x1), which must come back as a cosine.
  auto f = [](double x1, double x2) {
    return std::cos(8.0 * x1) + 0.5 * std::sin(3.0 * x1 - 2.0 * x2) + 0.25 * std::cos(7.0 * x2);
  };
  const Field u = Field::sample(g, f);
  const std::vector<double> p1{-3.0, -0.123, 0.4, 2.9, 7.5};
  const std::vector<double> p2{-1.7, 0.0, 0.77, 3.1};
  const auto vals = interpolate_tensor(u, p1, p2);
  REQUIRE(vals.size() == p1.size() * p2.size());
  for (std::size_t a = 0; a < p1.size(); ++a) {
    for (std::size_t b = 0; b < p2.size(); ++b) {
      const Complex v = vals[a * p2.size() + b];
      CHECK(std::abs(v.real() - f(p1[a], p2[b])) <= 1e-12);
      CHECK(std::abs(v.imag()) <= 1e-12);
    }
  }
}

TEST_CASE("interpolation at grid nodes returns the samples") {
  const Grid2D g(16, 5.0);
  const Field u = random_complex(g, 11);
  std::vector<double> p(g.n());
  for (int i = 0; i < g.n(); ++i) p[i] = g.coord(i);
  const auto vals = interpolate_tensor(u, p, p);
  double err = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) err = std::max(err, std::abs(vals[i] - u.values()[i]));
  CHECK(err <= 1e-12 * u.max_abs());
}

TEST_CASE("standing wave") {
  const Field& R = ground_state().profile;
  const AnalyticSolution sw(SolutionKind::kStandingWave, R);
  CHECK(max_abs_diff(sw(0.0), R) == 0.0);
  const Field at_pi = sw(pi);
  Field minus_R = R;
  minus_R *= Complex(-1.0);
  CHECK(max_abs_diff(at_pi, minus_R) <= 1e-14 * R.max_abs());
  CHECK(mass(sw(0.7)) == doctest::Approx(mass(R)).epsilon(1e-14));
  CHECK(pde_residual(sw, 0.3, kFocusing, 1e-4) <= 1e-6);
  CHECK_THROWS_AS(sw(0.0, Grid2D(128, 40.0)), UsageError);
}

TEST_CASE("pseudo-conformal solution at t = -1 is the chirped profile") {
  const Field& R = ground_state().profile;
  const AnalyticSolution pc(SolutionKind::kPseudoConformalStandingWave, R);
  const Field u = pc(-1.0);
  CHECK(u.grid() == R.grid());
  // R is even, so R(-x) is R(x); only the phase differs.
  double err = 0.0;
  const Grid2D& g = R.grid();
  for (int i1 = 0; i1 < g.n(); ++i1) {
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const double r2 = g.coord(i1) * g.coord(i1) + g.coord(i2) * g.coord(i2);
      err = std::max(err, std::abs(u(i1, i2) - std::polar(1.0, 1.0 - r2 / 4.0) * R(i1, i2)));
    }
  }
  CHECK(err <= 1e-11 * R.max_abs());
}

TEST_CASE("pseudo-conformal mass, gradient growth and residual") {
  const GroundStateResult& gs = ground_state();
  const AnalyticSolution pc(SolutionKind::kPseudoConformalStandingWave, gs.profile);
  for (double t : {-1.0, -0.5, -0.25}) {
    CHECK(std::abs(mass(pc(t)) - gs.mass) <= 1e-8 * gs.mass);
  }
  // |grad pc(t)|^2 = |grad R|^2 / t^2 + (1/4) int |x|^2 R^2.
  const double v = second_moment_of(gs.profile);
  for (double t : {-1.0, -0.5, -0.1, -0.01}) {
    const double expected = gs.gradient_norm_sq / (t * t) + 0.25 * v;
    CHECK(gradient_norm_sq(pc(t)) == doctest::Approx(expected).epsilon(1e-8));
  }
  // Consequently t^2 |grad|^2 is not constant on [-1, -0.25]; the correction is
  // of relative size V t^2 / (4 |grad R|^2).
  const double g1 = gradient_norm_sq(pc(-1.0));
  const double g4 = 0.0625 * gradient_norm_sq(pc(-0.25));
  CHECK(g1 / g4 - 1.0 == doctest::Approx(0.25 * v * (1.0 - 0.0625) / (gs.gradient_norm_sq + 0.0625 * 0.25 * v)));

  const double slope = std::log(gradient_norm_sq(pc(-0.01)) / gradient_norm_sq(pc(-0.1))) / std::log(10.0);
  CHECK(std::abs(slope - 2.0) <= 0.05);

  const double res = pde_residual(pc, -0.5, kFocusing);
  MESSAGE("pc residual at t = -0.5: " << res);
  CHECK(res <= 1e-4);
}

TEST_CASE("pde_residual flags a corrupted slice") {
  const AnalyticSolution pc(SolutionKind::kPseudoConformalStandingWave, ground_state().profile);
  const double t = -0.5, h = 1e-5;
  const Grid2D g = pc.natural_grid(t + h);
  Field plus = pc(t + h, g);
  plus *= Complex(1.01);
  CHECK(pde_residual(pc(t - h, g), pc(t, g), plus, h, kFocusing) > 1e-2);
  CHECK_THROWS_AS(pde_residual(pc(t - h, g), pc(t, g), ground_state().profile, h, kFocusing), UsageError);
}

TEST_CASE("the conjugate chirp is not a forward solution") {
  const AnalyticSolution pc(SolutionKind::kPseudoConformalStandingWave, ground_state().profile);
  const double t = -0.5, h = 1e-5;
  const Grid2D g = pc.natural_grid(t + h);
  auto conj = [](Field f) {
    for (auto& v : f.values()) v = std::conj(v);
    return f;
  };
  CHECK(pde_residual(conj(pc(t - h, g)), conj(pc(t, g)), conj(pc(t + h, g)), h, kFocusing) > 1.0);
}

TEST_CASE("pseudo-conformal evaluation guards") {
  const Field& R = ground_state().profile;
  CHECK_THROWS_AS(eval_pc_blowup(R, 0.0, R.grid()), DomainError);
  CHECK_THROWS_AS(eval_pc_blowup(R, -1.5, R.grid()), DomainError);
  CHECK_THROWS_AS(eval_pc_blowup(R, 0.25, R.grid()), DomainError);
  try {
    eval_pc_blowup(R, -0.25, R.grid());
    FAIL("expected a DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("smallest admissible |t| is 1") != std::string::npos);
  }
  const AnalyticSolution pc(SolutionKind::kPseudoConformalStandingWave, R);
  CHECK_FALSE(pc.valid_at(0.0));
  CHECK(pc.valid_at(-1.0));
  CHECK(pc.natural_grid(-0.5).box_length() == doctest::Approx(20.0));
}

TEST_CASE("blow-up time of the pseudo-conformal trace is recovered") {
  const GroundStateResult& gs = ground_state();
  const AnalyticSolution pc(SolutionKind::kPseudoConformalStandingWave, gs.profile);
  std::vector<ConservationRecord> recs;
  const int count = 41;
  for (int k = 0; k < count; ++k) {
    const double t = -std::pow(10.0, -2.0 * k / (count - 1));
    ConservationRecord r;
    r.t = t;
    r.gradient_norm_sq = gradient_norm_sq(pc(t));
    recs.push_back(r);
  }
  const BlowupEstimate est = estimate_t_star(recs);
  MESSAGE("pc T* estimate " << est.t_star);
  CHECK(std::abs(est.t_star) <= 0.02 * (0.0 - recs.front().t));
}
