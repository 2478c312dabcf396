#pragma once

#include <optional>
#include <vector>

#include "dsbu/field.hpp"
#include "dsbu/spectral.hpp"

namespace dsbu {

/// amplitude * exp(-(x1-c1)^2/(2 w1^2) - (x2-c2)^2/(2 w2^2)).
Field gaussian_profile(const Grid2D& grid, double amplitude, double width_x1 = 1.0,
                       double width_x2 = 1.0, double center_x1 = 0.0, double center_x2 = 0.0);

struct NegativeEnergyData {
  Field u;
  double amplitude = 0.0;
  double elongation = 1.0;  ///< width along x2 relative to x1
  double energy = 0.0;
};

struct NegativeEnergySearch {
  std::vector<double> elongations{1.0, 2.0, 4.0};
  double amplitude_start = 0.5;
  double amplitude_factor = 1.05;
  double amplitude_max = 50.0;
};

/// Amplitude continuation over Gaussians elongated along x2 (which pushes the
/// spectrum of |u|^2 towards the xi1 axis, where the symbol of B is largest).
/// Returns the first field with negative energy, or nothing. Makes no use of
/// the analytic criterion -nu < gamma.
std::optional<NegativeEnergyData> search_negative_energy(const Grid2D& grid, const OperatorParams& p,
                                                         const NegativeEnergySearch& search = {});

/// Negative-energy initial data for a blow-up run. Throws DomainError when
/// -nu >= gamma (no such data exist) or when the search fails on this grid.
NegativeEnergyData negative_energy_gaussian(const Grid2D& grid, const OperatorParams& p,
                                            const NegativeEnergySearch& search = {});

}  // namespace dsbu
