#include "dsbu/interpolation.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace dsbu {
namespace {

using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Row a holds the 1-D synthesis weights e^{i xi_k (p_a - x_0)} / n.
Matrix synthesis(const Grid2D& g, std::span<const double> points) {
  const int n = g.n();
  const double x0 = g.coord(0);
  Matrix e(static_cast<Eigen::Index>(points.size()), n);
  for (std::size_t a = 0; a < points.size(); ++a) {
    const double y = points[a] - x0;
    for (int k = 0; k < n; ++k) {
      const double arg = g.wavenumber(k) * y;
      e(static_cast<Eigen::Index>(a), k) =
          k == n / 2 ? Complex(std::cos(arg) / n, 0.0) : Complex(std::cos(arg), std::sin(arg)) / static_cast<double>(n);
    }
  }
  return e;
}

}  // namespace

std::vector<Complex> interpolate_tensor(const Field& f, std::span<const double> p1,
                                        std::span<const double> p2) {
  const Field spec = f.to_spectral();
  const int n = f.grid().n();
  Eigen::Map<const Matrix> coeffs(spec.values().data(), n, n);
  const Matrix e1 = synthesis(f.grid(), p1);
  const Matrix e2 = synthesis(f.grid(), p2);
  const Matrix out = e1 * coeffs * e2.transpose();
  return {out.data(), out.data() + out.size()};
}

}  // namespace dsbu
