#include "dsbu/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dsbu {
namespace {

// Cubic nonlinearity: exponent p/(p-1) with p = 3.
constexpr double kStabilizerExponent = 1.5;

// Circular shift moving the largest sample to the grid point at the origin.
Field recenter(const Field& f) {
  const Grid2D& g = f.grid();
  const int n = g.n();
  std::size_t best = 0;
  for (std::size_t i = 1; i < f.values().size(); ++i) {
    if (f.values()[i].real() > f.values()[best].real()) best = i;
  }
  const int s1 = n / 2 - static_cast<int>(best) / n;
  const int s2 = n / 2 - static_cast<int>(best) % n;
  if (s1 == 0 && s2 == 0) return f;
  Field out(g);
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      out((i1 + s1 + n) % n, (i2 + s2 + n) % n) = f(i1, i2);
    }
  }
  return out;
}

}  // namespace

double euler_lagrange_residual(const Field& profile, const OperatorParams& p) {
  auto pv = profile.values();
  std::vector<double> lw(pv.size());
  for (std::size_t i = 0; i < lw.size(); ++i) lw[i] = std::norm(pv[i]);
  apply_real_multiplier(lw, *cached_l_symbol(profile.grid(), p), profile.grid().n());
  Field r = laplacian(profile);
  auto rv = r.values();
  for (std::size_t i = 0; i < rv.size(); ++i) rv[i] += -pv[i] + lw[i] * pv[i];
  return r.l2_norm();
}

GroundStateResult solve_ground_state(const Grid2D& grid, const OperatorParams& p,
                                     const GroundStateConfig& cfg) {
  p.validate();
  if (p.nu != 1) throw DomainError("ground state is only sought in the focusing case nu = +1");
  if (!(cfg.tol > 0.0) || cfg.max_iterations < 1) throw UsageError("invalid ground-state config");

  const int n = grid.n();
  const auto k2 = laplace_symbol_table(grid);
  const auto lsym = l_symbol_table(grid, p);

  Field r = Field::sample(grid, [&](double x1, double x2) {
    return cfg.initial_amplitude * std::exp(-0.5 * (x1 * x1 + x2 * x2));
  });
  std::vector<double> work(grid.size());
  std::vector<double> history;

  GroundStateResult out{.profile = r, .residual_history = {}};
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    // Nonlinear term N = L(R^2) R.
    auto rv = r.values();
    for (std::size_t i = 0; i < work.size(); ++i) work[i] = std::norm(rv[i]);
    apply_real_multiplier(work, lsym, n);
    Field nl(grid);
    for (std::size_t i = 0; i < work.size(); ++i) nl.values()[i] = work[i] * rv[i].real();

    Field r_hat = r.to_spectral();
    nl.transform_to(Space::kSpectral);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < work.size(); ++i) {
      num += (1.0 + k2[i]) * std::norm(r_hat.values()[i]);
      den += (nl.values()[i] * std::conj(r_hat.values()[i])).real();
    }
    if (!(den > 0.0)) {
      throw ConvergenceError("spectral renormalization lost positivity of <N, R>", history);
    }
    const double factor = std::pow(num / den, kStabilizerExponent);
    for (std::size_t i = 0; i < work.size(); ++i) {
      nl.values()[i] *= factor / (1.0 + k2[i]);
    }
    nl.transform_to(Space::kPhysical);
    for (auto& v : nl.values()) v = Complex(v.real(), 0.0);
    r = std::move(nl);

    const double res = euler_lagrange_residual(r, p);
    history.push_back(res);
    if (!std::isfinite(res)) throw ConvergenceError("ground-state iteration diverged", history);
    if (res < cfg.tol) {
      out.iterations = it;
      break;
    }
    if (it == cfg.max_iterations) {
      throw ConvergenceError("ground state did not converge in " + std::to_string(it) +
                                 " iterations (last residual " + std::to_string(res) + ")",
                             history);
    }
  }

  double total = 0.0;
  for (const auto& v : r.values()) total += v.real();
  if (total < 0.0) r *= -1.0;
  r = recenter(r);

  out.profile = r;
  out.mass = mass(r);
  out.gradient_norm_sq = gradient_norm_sq(r);
  out.quartic = quartic_term(r, p);
  out.c_opt = 2.0 / out.mass;
  out.residual = euler_lagrange_residual(r, p);
  out.relative_residual = out.residual / std::sqrt(out.mass);
  out.sharpness_ratio = out.quartic / (out.gradient_norm_sq * out.mass);
  out.residual_history = std::move(history);
  return out;
}

SharpnessReport verify_sharp_inequality(const Field& u, const GroundStateResult& ground,
                                        const OperatorParams& p) {
  if (p.nu != 1) throw DomainError("sharp inequality is stated for nu = +1");
  const double m = mass(u);
  if (m == 0.0) throw DomainError("sharp inequality ratio is undefined for the zero field");
  SharpnessReport r;
  r.lhs = quartic_term(u, p);
  r.rhs = ground.c_opt * gradient_norm_sq(u) * m;
  r.ratio = r.lhs / r.rhs;
  return r;
}

}  // namespace dsbu
