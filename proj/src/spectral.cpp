#include "dsbu/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "dsbu/error.hpp"
#include "dsbu/fft.hpp"

namespace dsbu {
namespace {

constexpr double kRealTolerance = 1e-12;

void require_physical(const Field& u, const char* what) {
  if (!u.is_physical()) {
    throw UsageError(std::string(what) + ": expects a physical-space field");
  }
}

void require_real(const Field& f, const char* what) {
  require_physical(f, what);
  if (!f.all_finite()) throw DomainError(std::string(what) + ": non-finite input");
  if (relative_imaginary_residue(f) > kRealTolerance) {
    throw DomainError(std::string(what) + ": input is not real-valued");
  }
}

Field apply_symbol(const Field& f, std::span<const double> symbol) {
  std::vector<double> data(f.values().size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = f.values()[i].real();
  apply_real_multiplier(data, symbol, f.grid().n());
  Field out(f.grid());
  for (std::size_t i = 0; i < data.size(); ++i) out.values()[i] = data[i];
  return out;
}

std::vector<double> density_values(const Field& u) {
  std::vector<double> w(u.values().size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::norm(u.values()[i]);
  return w;
}

}  // namespace

void OperatorParams::validate() const {
  if (nu != 1 && nu != -1) throw DomainError("nu must be +-1");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive");
  if (!(zero_mode >= 0.0 && zero_mode <= 1.0)) {
    throw DomainError("zero_mode must lie in [0, 1]");
  }
}

double b_symbol(double xi1, double xi2, double zero_mode) {
  const double r2 = xi1 * xi1 + xi2 * xi2;
  return r2 > 0.0 ? xi1 * xi1 / r2 : zero_mode;
}

std::vector<double> l_symbol_table(const Grid2D& grid, const OperatorParams& p) {
  const int n = grid.n();
  std::vector<double> table(grid.size());
  for (int j1 = 0; j1 < n; ++j1) {
    const double xi1 = grid.wavenumber(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      table[grid.index(j1, j2)] = p.nu + p.gamma * b_symbol(xi1, grid.wavenumber(j2), p.zero_mode);
    }
  }
  return table;
}

std::vector<double> laplace_symbol_table(const Grid2D& grid) {
  const int n = grid.n();
  std::vector<double> table(grid.size());
  for (int j1 = 0; j1 < n; ++j1) {
    const double xi1 = grid.wavenumber(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const double xi2 = grid.wavenumber(j2);
      table[grid.index(j1, j2)] = xi1 * xi1 + xi2 * xi2;
    }
  }
  return table;
}

std::shared_ptr<const std::vector<double>> cached_l_symbol(const Grid2D& grid, const OperatorParams& p) {
  struct Entry {
    Grid2D grid;
    OperatorParams params;
    std::shared_ptr<const std::vector<double>> table;
  };
  thread_local std::vector<Entry> entries;
  for (const auto& e : entries) {
    if (e.grid == grid && e.params.nu == p.nu && e.params.gamma == p.gamma &&
        e.params.zero_mode == p.zero_mode) {
      return e.table;
    }
  }
  constexpr std::size_t kMaxEntries = 8;
  if (entries.size() >= kMaxEntries) entries.erase(entries.begin());
  auto table = std::make_shared<const std::vector<double>>(l_symbol_table(grid, p));
  entries.push_back(Entry{grid, p, table});
  return table;
}

void apply_real_multiplier(std::span<double> data, std::span<const double> symbol, int n) {
  const int nh = n / 2 + 1;
  thread_local std::vector<Complex> half;
  half.resize(static_cast<std::size_t>(n) * nh);
  fft::forward_real(data, half, n);
  for (int j1 = 0; j1 < n; ++j1) {
    const std::size_t row = static_cast<std::size_t>(j1) * n;
    Complex* h = half.data() + static_cast<std::size_t>(j1) * nh;
    for (int j2 = 0; j2 < nh; ++j2) h[j2] *= symbol[row + j2];
  }
  fft::inverse_real(half, data, n);
}

Field apply_B(const Field& f, double zero_mode) {
  require_real(f, "apply_B");
  const Grid2D& g = f.grid();
  std::vector<double> table(g.size());
  for (int j1 = 0; j1 < g.n(); ++j1) {
    for (int j2 = 0; j2 < g.n(); ++j2) {
      table[g.index(j1, j2)] = b_symbol(g.wavenumber(j1), g.wavenumber(j2), zero_mode);
    }
  }
  return apply_symbol(f, table);
}

Field apply_L(const Field& f, const OperatorParams& p) {
  p.validate();
  require_real(f, "apply_L");
  return apply_symbol(f, l_symbol_table(f.grid(), p));
}

Field laplacian(const Field& u) {
  Field out = u.to_spectral();
  const auto k2 = laplace_symbol_table(u.grid());
  auto vals = out.values();
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] *= -k2[i];
  out.transform_to(Space::kPhysical);
  return out;
}

Field density(const Field& u) {
  require_physical(u, "density");
  Field out(u.grid());
  auto src = u.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::norm(src[i]);
  return out;
}

double mass(const Field& u) {
  require_physical(u, "mass");
  double s = 0.0;
  for (const auto& v : u.values()) s += std::norm(v);
  return s * u.grid().cell_area();
}

double mass_spectral(const Field& u) {
  const Field spec = u.to_spectral();
  double s = 0.0;
  for (const auto& v : spec.values()) s += std::norm(v);
  return s * u.grid().cell_area() / static_cast<double>(u.grid().size());
}

double gradient_norm_sq(const Field& u) {
  const Field spec = u.to_spectral();
  const Grid2D& g = u.grid();
  double s = 0.0;
  for (int j1 = 0; j1 < g.n(); ++j1) {
    const double xi1 = g.wavenumber(j1);
    for (int j2 = 0; j2 < g.n(); ++j2) {
      const double xi2 = g.wavenumber(j2);
      s += (xi1 * xi1 + xi2 * xi2) * std::norm(spec(j1, j2));
    }
  }
  return s * g.cell_area() / static_cast<double>(g.size());
}

double quartic_term(const Field& u, const OperatorParams& p) {
  p.validate();
  require_physical(u, "quartic_term");
  const std::vector<double> w = density_values(u);
  std::vector<double> lw = w;
  apply_real_multiplier(lw, *cached_l_symbol(u.grid(), p), u.grid().n());
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * lw[i];
  return s * u.grid().cell_area();
}

double energy(const Field& u, const OperatorParams& p) {
  return 0.5 * gradient_norm_sq(u) - 0.25 * quartic_term(u, p);
}

double l4_norm_4(const Field& u) {
  require_physical(u, "l4_norm_4");
  double s = 0.0;
  for (const auto& v : u.values()) {
    const double a = std::norm(v);
    s += a * a;
  }
  return s * u.grid().cell_area();
}

MomentResult second_moment(const Field& u, double decay_tol) {
  require_physical(u, "second_moment");
  const Grid2D& g = u.grid();
  const int n = g.n();
  MomentResult r;
  double s = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const double x1 = g.coord(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double x2 = g.coord(i2);
      s += (x1 * x1 + x2 * x2) * std::norm(u(i1, i2));
    }
  }
  r.value = s * g.cell_area();
  for (int i = 0; i < n; ++i) {
    r.boundary_max = std::max({r.boundary_max, std::abs(u(0, i)), std::abs(u(i, 0)),
                               std::abs(u(n - 1, i)), std::abs(u(i, n - 1))});
  }
  r.valid = r.boundary_max <= decay_tol * u.max_abs();
  return r;
}

double first_moment(const Field& u, int axis) {
  require_physical(u, "first_moment");
  const Grid2D& g = u.grid();
  double s = 0.0;
  for (int i1 = 0; i1 < g.n(); ++i1) {
    for (int i2 = 0; i2 < g.n(); ++i2) {
      s += g.coord(axis == 0 ? i1 : i2) * std::norm(u(i1, i2));
    }
  }
  return s * g.cell_area();
}

}  // namespace dsbu
