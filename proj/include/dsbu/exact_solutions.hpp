#pragma once

#include "dsbu/field.hpp"
#include "dsbu/spectral.hpp"

namespace dsbu {

enum class SolutionKind { kStandingWave, kPseudoConformalStandingWave };

/// Closed-form solution built on a ground-state profile R.
///
/// kStandingWave is R e^{it} for any t. kPseudoConformalStandingWave is
///   pc[u_R](t, x) = e^{i|x|^2/(4t) - i/t} R(x/t) / |t|,  t in [-1, 0),
/// the pseudo-conformal image of the standing wave, which blows up at t = 0
/// with mass |R|_2^2 and |grad u| ~ 1/|t|. The chirp points inwards; its
/// complex conjugate solves the time-reversed equation instead.
class AnalyticSolution {
 public:
  AnalyticSolution(SolutionKind kind, Field profile);

  SolutionKind kind() const { return kind_; }
  const Field& profile() const { return profile_; }
  bool valid_at(double t) const;

  /// Natural sampling grid at time t: R's grid for the standing wave, R's
  /// grid scaled by |t| for the blow-up solution.
  Grid2D natural_grid(double t) const;
  Field operator()(double t) const;
  Field operator()(double t, const Grid2D& target) const;

 private:
  SolutionKind kind_;
  Field profile_;
};

/// R e^{it} on R's grid.
Field eval_standing_wave(const Field& profile, double t);

/// Pseudo-conformal blow-up solution at t in [-1, 0) sampled on `target`,
/// with R(x/t) from band-limited interpolation of the profile. Throws
/// DomainError if |t| is outside (0, 1] or if target.dx() > |t| * dx_R, naming
/// the smallest admissible |t|.
Field eval_pc_blowup(const Field& profile, double t, const Grid2D& target);

/// |i (u_plus - u_minus)/(2h) + Delta u + L(|u|^2) u|_2 / |u|_2 with a
/// spectral Laplacian. Throws UsageError on mismatched grids.
double pde_residual(const Field& u_minus, const Field& u, const Field& u_plus, double h,
                    const OperatorParams& p);

/// pde_residual on three slices of an analytic solution around t.
double pde_residual(const AnalyticSolution& sol, double t, const OperatorParams& p, double h = 1e-5);

}  // namespace dsbu
