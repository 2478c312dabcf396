#include "dsbu/exact_solutions.hpp"

#include <cmath>
#include <sstream>

#include "dsbu/error.hpp"
#include "dsbu/interpolation.hpp"

namespace dsbu {

AnalyticSolution::AnalyticSolution(SolutionKind kind, Field profile)
    : kind_(kind), profile_(std::move(profile)) {
  if (!profile_.is_physical()) throw UsageError("AnalyticSolution: profile must be physical");
}

bool AnalyticSolution::valid_at(double t) const {
  if (kind_ == SolutionKind::kStandingWave) return std::isfinite(t);
  return t >= -1.0 && t < 0.0;
}

Grid2D AnalyticSolution::natural_grid(double t) const {
  if (kind_ == SolutionKind::kStandingWave) return profile_.grid();
  return profile_.grid().scaled(std::abs(t));
}

Field AnalyticSolution::operator()(double t) const { return (*this)(t, natural_grid(t)); }

Field AnalyticSolution::operator()(double t, const Grid2D& target) const {
  if (!valid_at(t)) {
    std::ostringstream os;
    os << "analytic solution evaluated outside its interval at t = " << t;
    throw DomainError(os.str());
  }
  if (kind_ == SolutionKind::kStandingWave) {
    require_same_grid(target, profile_.grid(), "standing wave");
    return eval_standing_wave(profile_, t);
  }
  return eval_pc_blowup(profile_, t, target);
}

Field eval_standing_wave(const Field& profile, double t) {
  Field out = profile;
  out *= std::polar(1.0, t);
  return out;
}

Field eval_pc_blowup(const Field& profile, double t, const Grid2D& target) {
  if (!(t >= -1.0 && t < 0.0)) {
    throw DomainError("pseudo-conformal solution is defined for t in [-1, 0)");
  }
  const double abs_t = std::abs(t);
  const double min_abs_t = target.dx() / profile.grid().dx();
  if (abs_t < min_abs_t * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "target grid too coarse for t = " << t << "; smallest admissible |t| is " << min_abs_t;
    throw DomainError(os.str());
  }

  const int n = target.n();
  std::vector<double> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = target.coord(i) / t;
  const auto scaled = interpolate_tensor(profile, pts, pts);

  Field out(target);
  for (int i1 = 0; i1 < n; ++i1) {
    const double x1 = target.coord(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double x2 = target.coord(i2);
      const double phase = (x1 * x1 + x2 * x2) / (4.0 * t) - 1.0 / t;
      out(i1, i2) = std::polar(1.0 / abs_t, phase) * scaled[target.index(i1, i2)];
    }
  }
  return out;
}

double pde_residual(const Field& u_minus, const Field& u, const Field& u_plus, double h,
                    const OperatorParams& p) {
  require_same_grid(u.grid(), u_minus.grid(), "pde_residual");
  require_same_grid(u.grid(), u_plus.grid(), "pde_residual");
  if (!(h > 0.0)) throw UsageError("pde_residual: h must be positive");
  const Field lap = laplacian(u);
  std::vector<double> pot(u.values().size());
  for (std::size_t i = 0; i < pot.size(); ++i) pot[i] = std::norm(u.values()[i]);
  apply_real_multiplier(pot, *cached_l_symbol(u.grid(), p), u.grid().n());

  Field r(u.grid());
  const Complex i_unit(0.0, 1.0);
  for (std::size_t i = 0; i < pot.size(); ++i) {
    const Complex dt = (u_plus.values()[i] - u_minus.values()[i]) / (2.0 * h);
    r.values()[i] = i_unit * dt + lap.values()[i] + pot[i] * u.values()[i];
  }
  return r.l2_norm() / u.l2_norm();
}

double pde_residual(const AnalyticSolution& sol, double t, const OperatorParams& p, double h) {
  // The finest of the three natural grids admits all three slices.
  const double t_fine = std::abs(t + h) < std::abs(t - h) ? t + h : t - h;
  const Grid2D g = sol.natural_grid(std::abs(t_fine) < std::abs(t) ? t_fine : t);
  return pde_residual(sol(t - h, g), sol(t, g), sol(t + h, g), h, p);
}

}  // namespace dsbu
