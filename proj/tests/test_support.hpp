#pragma once

// Shared helpers for the unit tests: analytic fields, seeded random fields,
// and oracles that avoid the FFT path entirely.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "dsbu/field.hpp"
#include "dsbu/grid.hpp"

namespace dsbu::testing {

inline Field gaussian(const Grid2D& g, double amplitude = 1.0, double cx = 0.0, double cy = 0.0) {
  return Field::sample(g, [&](double x1, double x2) {
    const double r2 = (x1 - cx) * (x1 - cx) + (x2 - cy) * (x2 - cy);
    return amplitude * std::exp(-0.5 * r2);
  });
}

inline Field random_real(const Grid2D& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  Field f(g);
  for (auto& v : f.values()) v = dist(rng);
  return f;
}

inline Field random_complex(const Grid2D& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  Field f(g);
  for (auto& v : f.values()) v = Complex(dist(rng), dist(rng));
  return f;
}

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Direct O(n^4) evaluation of a Fourier multiplier on a real field,
/// using the DFT definition with explicit exponentials.
inline std::vector<double> brute_force_multiplier(const Grid2D& g, const std::vector<double>& f,
                                                  const std::function<double(double, double)>& symbol) {
  const int n = g.n();
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<Complex> spec(g.size());
  for (int k1 = 0; k1 < n; ++k1) {
    for (int k2 = 0; k2 < n; ++k2) {
      Complex acc = 0.0;
      for (int j1 = 0; j1 < n; ++j1) {
        for (int j2 = 0; j2 < n; ++j2) {
          const double phase = -two_pi * (static_cast<double>(k1) * j1 + static_cast<double>(k2) * j2) / n;
          acc += f[j1 * n + j2] * std::polar(1.0, phase);
        }
      }
      const int m1 = k1 < n / 2 ? k1 : k1 - n;
      const int m2 = k2 < n / 2 ? k2 : k2 - n;
      const double xi1 = two_pi * m1 / g.box_length();
      const double xi2 = two_pi * m2 / g.box_length();
      spec[k1 * n + k2] = acc * symbol(xi1, xi2);
    }
  }
  std::vector<double> out(g.size());
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = 0; j2 < n; ++j2) {
      Complex acc = 0.0;
      for (int k1 = 0; k1 < n; ++k1) {
        for (int k2 = 0; k2 < n; ++k2) {
          const double phase = two_pi * (static_cast<double>(k1) * j1 + static_cast<double>(k2) * j2) / n;
          acc += spec[k1 * n + k2] * std::polar(1.0, phase);
        }
      }
      out[j1 * n + j2] = acc.real() / (static_cast<double>(n) * n);
    }
  }
  return out;
}

inline std::vector<double> real_parts(const Field& f) {
  std::vector<double> out;
  out.reserve(f.values().size());
  for (const auto& v : f.values()) out.push_back(v.real());
  return out;
}

inline double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

inline double inner_real(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) s += a.values()[i].real() * b.values()[i].real();
  return s * a.grid().cell_area();
}

}  // namespace dsbu::testing
