#pragma once

#include <complex>
#include <span>
#include <vector>

#include "dsbu/grid.hpp"

namespace dsbu {

using Complex = std::complex<double>;

enum class Space { kPhysical, kSpectral };

/// Complex samples of u on a Grid2D, tagged with the representation they hold.
///
/// Spectral values are raw (unnormalized) DFT coefficients in FFT order; the
/// round trip through to_spectral/to_physical is the identity up to roundoff.
class Field {
 public:
  explicit Field(const Grid2D& grid, Space space = Space::kPhysical);
  Field(const Grid2D& grid, std::vector<Complex> values, Space space = Space::kPhysical);

  /// Samples f(x1, x2) at every physical grid point.
  template <typename F>
  static Field sample(const Grid2D& grid, F&& f) {
    Field out(grid);
    const int n = grid.n();
    for (int i1 = 0; i1 < n; ++i1) {
      const double x1 = grid.coord(i1);
      for (int i2 = 0; i2 < n; ++i2) {
        out.values_[grid.index(i1, i2)] = Complex(f(x1, grid.coord(i2)));
      }
    }
    return out;
  }

  const Grid2D& grid() const { return grid_; }
  Space space() const { return space_; }
  bool is_physical() const { return space_ == Space::kPhysical; }

  std::span<Complex> values() { return values_; }
  std::span<const Complex> values() const { return values_; }
  std::vector<Complex>& data() { return values_; }

  Complex& operator()(int i1, int i2) { return values_[grid_.index(i1, i2)]; }
  const Complex& operator()(int i1, int i2) const { return values_[grid_.index(i1, i2)]; }

  Field to_spectral() const;
  Field to_physical() const;
  void transform_to(Space target);

  bool all_finite() const;
  double max_abs() const;
  /// Discrete L2 norm with quadrature weight dx^2 (physical) or dx^2/n^2 (spectral).
  double l2_norm() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(Complex factor);

 private:
  Grid2D grid_;
  std::vector<Complex> values_;
  Space space_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Complex factor, Field a);

/// Largest |Im f| over the grid divided by the rms of the samples (0 for the zero field).
double relative_imaginary_residue(const Field& f);

}  // namespace dsbu
