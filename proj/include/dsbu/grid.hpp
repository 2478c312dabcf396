#pragma once

#include <cstddef>
#include <numbers>

namespace dsbu {

/// Periodic n x n square [-L/2, L/2)^2 standing in for the plane.
///
/// Physical index i maps to x_i = -L/2 + i*dx. Spectral storage follows the
/// usual FFT order: index j < n/2 carries wavenumber 2*pi*j/L, the rest carry
/// 2*pi*(j-n)/L, so the Nyquist row sits at -pi*n/L.
class Grid2D {
 public:
  Grid2D(int n, double box_length);

  int n() const { return n_; }
  double box_length() const { return box_length_; }
  double dx() const { return box_length_ / n_; }
  double cell_area() const { return dx() * dx(); }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }

  double coord(int i) const { return -0.5 * box_length_ + i * dx(); }
  int signed_mode(int j) const { return j < n_ / 2 ? j : j - n_; }
  double wavenumber(int j) const {
    return 2.0 * std::numbers::pi * signed_mode(j) / box_length_;
  }

  /// Row-major flat index with x2 fastest.
  std::size_t index(int i1, int i2) const {
    return static_cast<std::size_t>(i1) * n_ + i2;
  }

  /// Same lattice with every length multiplied by `factor`.
  Grid2D scaled(double factor) const { return Grid2D(n_, box_length_ * factor); }

  bool operator==(const Grid2D&) const = default;

 private:
  int n_;
  double box_length_;
};

/// Throws UsageError unless both grids are identical.
void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what);

}  // namespace dsbu
