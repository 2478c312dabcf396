#pragma once

#include <span>
#include <vector>

#include "dsbu/field.hpp"

namespace dsbu {

/// Band-limited (trigonometric) interpolation of a periodic field at the
/// tensor-product points (p1[a], p2[b]), returned row-major with p2 fastest.
/// The Nyquist coefficient is split symmetrically so real data stay real.
std::vector<Complex> interpolate_tensor(const Field& f, std::span<const double> p1,
                                        std::span<const double> p2);

}  // namespace dsbu
