#pragma once

#include <complex>
#include <span>

namespace dsbu::fft {

using Complex = std::complex<double>;

/// Unnormalized forward 2-D DFT, in place, on an n x n row-major array.
void forward(std::span<Complex> data, int n);

/// Inverse 2-D DFT including the 1/n^2 factor, in place.
void inverse(std::span<Complex> data, int n);

/// Real-to-half-complex forward DFT: n x n reals to n x (n/2 + 1) coefficients.
void forward_real(std::span<const double> in, std::span<Complex> half, int n);

/// Inverse of forward_real including the 1/n^2 factor. Overwrites `half`.
void inverse_real(std::span<Complex> half, std::span<double> out, int n);

}  // namespace dsbu::fft
