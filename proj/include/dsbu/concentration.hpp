#pragma once

#include <span>
#include <vector>

#include "dsbu/field.hpp"
#include "dsbu/spectral.hpp"

namespace dsbu {

enum class WindowShape { kDisk, kSquare };

/// Disk of radius `size` or axis-aligned square of side `size`, centred on a
/// grid point. A cell belongs to the window iff its centre does.
struct WindowSpec {
  WindowShape shape = WindowShape::kDisk;
  double size = 1.0;
};

struct WindowedMass {
  double best_mass = 0.0;
  int i1 = 0;
  int i2 = 0;
  double y1 = 0.0;  ///< centre coordinates of the maximizing window
  double y2 = 0.0;
  bool clamped = false;  ///< window exceeded the box; best_mass is the total mass
};

/// max over grid centres y of the mass of u inside the window around y,
/// computed as a periodic correlation of |u|^2 with the window indicator.
/// Ties go to the lexicographically smallest (i1, i2). Throws UsageError for
/// size <= dx or a spectral field.
WindowedMass windowed_mass_sup(const Field& u, const WindowSpec& w);

struct RescaledSnapshot {
  Field v;
  double rho = 0.0;
};

/// v(x) = rho u(rho x) with rho = 1/|grad u|_2. v lives on the grid scaled by
/// 1/rho, where its samples are rho times those of u, so no interpolation is
/// needed. Throws DomainError when grad u = 0.
RescaledSnapshot rescaled_snapshot(const Field& u);

enum class LambdaKind { kParabolicMinusEps, kConic };

/// lambda(t) = (t_star - t)^(1/2 - eps) or (t_star - t)^(1 - eps).
struct LambdaSchedule {
  LambdaKind kind = LambdaKind::kParabolicMinusEps;
  double epsilon = 0.1;
  double t_star = 0.0;

  void validate() const;
  double exponent() const;
  /// Window size at t; 0 when t >= t_star.
  double operator()(double t) const;
};

struct Snapshot {
  double t = 0.0;
  Field u;
};

struct ConcentrationRecord {
  double t = 0.0;
  WindowSpec window;
  double best_mass = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
  double rho = 0.0;
  double gradient_norm_sq = 0.0;
  double rescaled_quartic = 0.0;
  double rescaled_energy = 0.0;
  bool clamped = false;
  bool skipped = false;  ///< schedule nonpositive at t
};

struct Theorem6Summary {
  std::size_t terminal_begin = 0;   ///< first record of the last decade of gradient growth
  double min_best_mass = 0.0;       ///< over the terminal segment
  double threshold = 0.0;           ///< 2 / c_opt
  double ratio = 0.0;               ///< min_best_mass / threshold
  double terminal_ratio = 0.0;      ///< best_mass / threshold at the last unskipped record
  double lambda_grad_first = 0.0;   ///< lambda sqrt(grad_sq) at the first and last terminal records
  double lambda_grad_last = 0.0;
  bool lambda_grad_grows = false;
  double ratio_t_star_minus = 0.0;  ///< ratio with t_star shifted down / up by 2%; NaN if no window fits
  double ratio_t_star_plus = 0.0;
  std::size_t skipped = 0;
};

struct Theorem6Trace {
  std::vector<ConcentrationRecord> records;
  Theorem6Summary summary;
};

/// Disk windows of radius schedule(t) on every snapshot, with rescaled
/// diagnostics. The 2% t_star shift is taken relative to
/// max(|t_star|, t_star - t_first) so that t_star = 0 is perturbed too.
Theorem6Trace theorem6_trace(std::span<const Snapshot> snapshots, const LambdaSchedule& schedule,
                             double c_opt, const OperatorParams& p);

struct SquareRecord {
  double t = 0.0;
  double side = 0.0;
  double best_mass = 0.0;
  double sqrt_best_mass = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
  bool clamped = false;
  bool skipped = false;  ///< t >= t_star
};

struct Theorem7Summary {
  std::size_t terminal_begin = 0;  ///< first record of the last decade in t_star - t
  double max_sqrt_best = 0.0;
  double min_sqrt_best = 0.0;
  double eta = 0.0;
  bool above_eta = false;          ///< min_sqrt_best > eta over the terminal segment
  std::size_t skipped = 0;
};

struct Theorem7Trace {
  std::vector<SquareRecord> records;
  Theorem7Summary summary;
};

/// Square windows of side c_side sqrt(t_star - t).
Theorem7Trace theorem7_trace(std::span<const Snapshot> snapshots, double c_side, double t_star,
                             double eta);

}  // namespace dsbu
