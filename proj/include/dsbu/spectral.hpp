#pragma once

#include <memory>
#include <span>
#include <vector>

#include "dsbu/field.hpp"
#include "dsbu/grid.hpp"

namespace dsbu {

/// Value assigned to the symbol xi1^2/|xi|^2 at xi = 0, where it is undefined.
/// One half is the angular mean of the symbol; it makes the lattice sum
/// sum_k m(xi_k) |w_k|^2 a consistent quadrature of the whole-plane integral,
/// which the discrete Pohozaev identity of the ground state depends on.
inline constexpr double kDefaultZeroMode = 0.5;

/// Coefficients of L = nu*I + gamma*B.
struct OperatorParams {
  int nu = 1;
  double gamma = 1.0;
  double zero_mode = kDefaultZeroMode;

  /// Throws DomainError unless nu is +-1, gamma > 0, zero_mode in [0, 1].
  void validate() const;
};

/// Symbol of B at (xi1, xi2).
double b_symbol(double xi1, double xi2, double zero_mode = kDefaultZeroMode);

/// Tabulated symbol nu + gamma*m(xi) in FFT storage order.
std::vector<double> l_symbol_table(const Grid2D& grid, const OperatorParams& p);

/// Same table, memoized per thread for repeated functional evaluations.
std::shared_ptr<const std::vector<double>> cached_l_symbol(const Grid2D& grid, const OperatorParams& p);

/// Tabulated |xi|^2 in FFT storage order.
std::vector<double> laplace_symbol_table(const Grid2D& grid);

/// Applies a real, even multiplier (full n x n table in FFT order) to real
/// data in place, through a real-to-complex transform.
void apply_real_multiplier(std::span<double> data, std::span<const double> symbol, int n);

/// B f for real f. Throws DomainError if f has an imaginary part above 1e-12
/// relative to its rms, UsageError if f is spectral.
Field apply_B(const Field& f, double zero_mode = kDefaultZeroMode);

/// nu f + gamma B f; same contract as apply_B.
Field apply_L(const Field& f, const OperatorParams& p);

/// Spectral Laplacian; returns a physical field.
Field laplacian(const Field& u);

/// |u|^2 as a real-valued physical field.
Field density(const Field& u);

// Quadrature functionals. Integrals over the periodic box use the rectangle
// rule dx^2 * sum, which is spectrally accurate for smooth periodic integrands.

double mass(const Field& u);
/// Mass evaluated from DFT coefficients through Parseval.
double mass_spectral(const Field& u);
double gradient_norm_sq(const Field& u);
/// int L(|u|^2)|u|^2.
double quartic_term(const Field& u, const OperatorParams& p);
/// 1/2 grad_sq - 1/4 quartic.
double energy(const Field& u, const OperatorParams& p);
double l4_norm_4(const Field& u);

struct MomentResult {
  double value = 0.0;
  bool valid = true;           ///< boundary decay held
  double boundary_max = 0.0;   ///< max |u| on the outer rows/columns
};

/// int |x|^2 |u|^2 with centered coordinates. `valid` is false when |u| on
/// the box boundary exceeds decay_tol * max|u|, i.e. when the periodic box
/// no longer represents the plane.
MomentResult second_moment(const Field& u, double decay_tol = 1e-10);

/// int x_axis |u|^2 for axis 0 (x1) or 1 (x2).
double first_moment(const Field& u, int axis);

}  // namespace dsbu
