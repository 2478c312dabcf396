#pragma once

#include <vector>

#include "dsbu/error.hpp"
#include "dsbu/field.hpp"
#include "dsbu/spectral.hpp"

namespace dsbu {

struct GroundStateConfig {
  double tol = 1e-10;          ///< stop once the Euler-Lagrange residual drops below this
  int max_iterations = 2000;
  double initial_amplitude = 2.0;
};

/// Positive solution R of Delta R - R + L(R^2) R = 0 and the sharp constant 2/|R|^2.
struct GroundStateResult {
  Field profile;
  double c_opt = 0.0;
  double mass = 0.0;
  double gradient_norm_sq = 0.0;
  double quartic = 0.0;
  double residual = 0.0;           ///< |Delta R - R + L(R^2)R|_2
  double relative_residual = 0.0;  ///< residual / |R|_2
  int iterations = 0;
  double sharpness_ratio = 0.0;    ///< quartic / (grad_sq * mass)
  std::vector<double> residual_history;
};

/// Spectral renormalization failed to reach the tolerance.
class ConvergenceError : public DomainError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : DomainError(what), history_(std::move(history)) {}
  const std::vector<double>& residual_history() const { return history_; }

 private:
  std::vector<double> history_;
};

/// Fixed point of R^ <- S^{3/2} (L(R^2)R)^ / (1 + |xi|^2) with the Rayleigh-type
/// stabilizer S = <(1+|xi|^2) R^, R^> / <(L(R^2)R)^, R^>, started from a
/// Gaussian. The profile is sign-normalized and its peak moved to the origin.
///
/// Throws DomainError for nu = -1 and ConvergenceError when max_iterations
/// is exhausted.
GroundStateResult solve_ground_state(const Grid2D& grid, const OperatorParams& p,
                                     const GroundStateConfig& cfg = {});

/// |Delta R - R + L(|R|^2) R|_2 for a real profile.
double euler_lagrange_residual(const Field& profile, const OperatorParams& p);

struct SharpnessReport {
  double lhs = 0.0;    ///< int L(|u|^2)|u|^2
  double rhs = 0.0;    ///< c_opt |grad u|^2 |u|^2
  double ratio = 0.0;  ///< lhs / rhs, at most 1 up to discretization error
};

/// Evaluates both sides of the sharp Gagliardo-Nirenberg-type inequality for u.
SharpnessReport verify_sharp_inequality(const Field& u, const GroundStateResult& ground,
                                        const OperatorParams& p);

}  // namespace dsbu
