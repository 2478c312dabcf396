#include "dsbu/initial_data.hpp"

#include <cmath>

#include "dsbu/error.hpp"

namespace dsbu {

Field gaussian_profile(const Grid2D& grid, double amplitude, double width_x1, double width_x2,
                       double center_x1, double center_x2) {
  if (!(width_x1 > 0.0) || !(width_x2 > 0.0)) throw UsageError("gaussian widths must be positive");
  return Field::sample(grid, [&](double x1, double x2) {
    const double a = (x1 - center_x1) / width_x1;
    const double b = (x2 - center_x2) / width_x2;
    return amplitude * std::exp(-0.5 * (a * a + b * b));
  });
}

std::optional<NegativeEnergyData> search_negative_energy(const Grid2D& grid, const OperatorParams& p,
                                                         const NegativeEnergySearch& search) {
  p.validate();
  for (double elongation : search.elongations) {
    const Field shape = gaussian_profile(grid, 1.0, 1.0, elongation);
    const double grad = gradient_norm_sq(shape);
    const double quartic = quartic_term(shape, p);
    // E(A shape) = A^2 grad / 2 - A^4 quartic / 4; walk A upwards.
    for (double a = search.amplitude_start; a <= search.amplitude_max; a *= search.amplitude_factor) {
      const double e = 0.5 * a * a * grad - 0.25 * a * a * a * a * quartic;
      if (e < 0.0) {
        Field u = shape;
        u *= a;
        const double exact = energy(u, p);
        if (exact < 0.0) return NegativeEnergyData{std::move(u), a, elongation, exact};
      }
    }
  }
  return std::nullopt;
}

NegativeEnergyData negative_energy_gaussian(const Grid2D& grid, const OperatorParams& p,
                                            const NegativeEnergySearch& search) {
  p.validate();
  if (-p.nu >= p.gamma) {
    throw DomainError("negative-energy data exist only when -nu < gamma");
  }
  auto found = search_negative_energy(grid, p, search);
  if (!found) throw DomainError("no negative-energy Gaussian found on this grid; enlarge the search");
  return std::move(*found);
}

}  // namespace dsbu
