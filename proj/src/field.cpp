#include "dsbu/field.hpp"

#include <algorithm>
#include <cmath>

#include "dsbu/error.hpp"
#include "dsbu/fft.hpp"

namespace dsbu {

Field::Field(const Grid2D& grid, Space space)
    : grid_(grid), values_(grid.size(), Complex(0.0, 0.0)), space_(space) {}

Field::Field(const Grid2D& grid, std::vector<Complex> values, Space space)
    : grid_(grid), values_(std::move(values)), space_(space) {
  if (values_.size() != grid_.size()) {
    throw UsageError("field value count does not match grid size");
  }
}

void Field::transform_to(Space target) {
  if (target == space_) return;
  if (target == Space::kSpectral) {
    fft::forward(values_, grid_.n());
  } else {
    fft::inverse(values_, grid_.n());
  }
  space_ = target;
}

Field Field::to_spectral() const {
  Field out = *this;
  out.transform_to(Space::kSpectral);
  return out;
}

Field Field::to_physical() const {
  Field out = *this;
  out.transform_to(Space::kPhysical);
  return out;
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

double Field::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::l2_norm() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  double w = grid_.cell_area();
  if (space_ == Space::kSpectral) w /= static_cast<double>(grid_.size());
  return std::sqrt(s * w);
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field addition");
  if (space_ != other.space_) throw UsageError("field addition: representations differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field subtraction");
  if (space_ != other.space_) throw UsageError("field subtraction: representations differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(Complex factor) {
  for (auto& v : values_) v *= factor;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Complex factor, Field a) { return a *= factor; }

double relative_imaginary_residue(const Field& f) {
  double max_imag = 0.0;
  double sum_sq = 0.0;
  for (const auto& v : f.values()) {
    max_imag = std::max(max_imag, std::abs(v.imag()));
    sum_sq += std::norm(v);
  }
  const double rms = std::sqrt(sum_sq / static_cast<double>(f.values().size()));
  return rms > 0.0 ? max_imag / rms : 0.0;
}

}  // namespace dsbu
