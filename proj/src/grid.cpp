#include "dsbu/grid.hpp"

#include <cmath>
#include <string>

#include "dsbu/error.hpp"

namespace dsbu {

Grid2D::Grid2D(int n, double box_length) : n_(n), box_length_(box_length) {
  if (n < 8 || (n & (n - 1)) != 0) {
    throw UsageError("grid size n must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw UsageError("box_length must be positive and finite");
  }
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
  if (!(a == b)) {
    throw UsageError(std::string(what) + ": fields live on different grids");
  }
}

}  // namespace dsbu
