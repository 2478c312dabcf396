#include "dsbu/concentration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "dsbu/error.hpp"
#include "dsbu/fft.hpp"

namespace dsbu {

namespace {

// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
// The first exception thrown by any task is rethrown.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

// Periodic offset of index i from 0, in (-n/2, n/2].
int signed_offset(int i, int n) { return i > n / 2 ? i - n : i; }

bool window_exceeds_box(const Grid2D& g, const WindowSpec& w) {
  return w.shape == WindowShape::kDisk ? w.size > 0.5 * g.box_length() : w.size > g.box_length();
}

std::vector<double> window_indicator(const Grid2D& g, const WindowSpec& w) {
  const int n = g.n();
  const double dx = g.dx();
  std::vector<double> chi(g.size(), 0.0);
  for (int i1 = 0; i1 < n; ++i1) {
    const double d1 = signed_offset(i1, n) * dx;
    for (int i2 = 0; i2 < n; ++i2) {
      const double d2 = signed_offset(i2, n) * dx;
      bool inside;
      if (w.shape == WindowShape::kDisk) {
        inside = d1 * d1 + d2 * d2 <= w.size * w.size;
      } else {
        inside = std::abs(d1) <= 0.5 * w.size && std::abs(d2) <= 0.5 * w.size;
      }
      if (inside) chi[g.index(i1, i2)] = 1.0;
    }
  }
  return chi;
}

}  // namespace

WindowedMass windowed_mass_sup(const Field& u, const WindowSpec& w) {
  if (!u.is_physical()) throw UsageError("windowed_mass_sup: field must be physical");
  const Grid2D& g = u.grid();
  if (!(w.size > g.dx())) throw UsageError("window size must exceed the grid spacing");

  WindowedMass out;
  if (window_exceeds_box(g, w)) {
    out.best_mass = mass(u);
    out.y1 = g.coord(0);
    out.y2 = g.coord(0);
    out.clamped = true;
    return out;
  }

  const int n = g.n();
  const std::size_t half_size = static_cast<std::size_t>(n) * (n / 2 + 1);
  std::vector<double> dens(g.size());
  for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::norm(u.values()[i]);
  const std::vector<double> chi = window_indicator(g, w);

  std::vector<Complex> dh(half_size), ch(half_size);
  fft::forward_real(dens, dh, n);
  fft::forward_real(chi, ch, n);
  // chi is even under the periodic reflection, so correlation = convolution.
  for (std::size_t k = 0; k < half_size; ++k) dh[k] *= ch[k];
  std::vector<double> conv(g.size());
  fft::inverse_real(dh, conv, n);

  const double peak = *std::max_element(conv.begin(), conv.end());
  const double tie_tol = 1e-12 * std::abs(peak);
  std::size_t best = 0;
  for (std::size_t i = 0; i < conv.size(); ++i) {
    if (conv[i] >= peak - tie_tol) {
      best = i;
      break;
    }
  }
  out.best_mass = std::max(0.0, peak) * g.cell_area();
  out.i1 = static_cast<int>(best / n);
  out.i2 = static_cast<int>(best % n);
  out.y1 = g.coord(out.i1);
  out.y2 = g.coord(out.i2);
  return out;
}

RescaledSnapshot rescaled_snapshot(const Field& u) {
  const double grad_sq = gradient_norm_sq(u);
  if (!(grad_sq > 0.0)) throw DomainError("rescaled_snapshot: gradient of u vanishes");
  Field phys = u.is_physical() ? u : u.to_physical();
  const double rho = 1.0 / std::sqrt(grad_sq);
  Field v(phys.grid().scaled(1.0 / rho), std::move(phys.data()));
  v *= Complex(rho);
  return {std::move(v), rho};
}

void LambdaSchedule::validate() const {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw UsageError("schedule epsilon must lie in (0, 1/2)");
  if (!std::isfinite(t_star)) throw UsageError("schedule t_star must be finite");
}

double LambdaSchedule::exponent() const {
  return kind == LambdaKind::kConic ? 1.0 - epsilon : 0.5 - epsilon;
}

double LambdaSchedule::operator()(double t) const {
  const double gap = t_star - t;
  return gap > 0.0 ? std::pow(gap, exponent()) : 0.0;
}

namespace {

ConcentrationRecord disk_record(const Snapshot& s, double radius, const OperatorParams& p) {
  ConcentrationRecord r;
  r.t = s.t;
  r.window = {WindowShape::kDisk, radius};
  r.gradient_norm_sq = gradient_norm_sq(s.u);
  const RescaledSnapshot rs = rescaled_snapshot(s.u);
  r.rho = rs.rho;
  r.rescaled_quartic = quartic_term(rs.v, p);
  r.rescaled_energy = energy(rs.v, p);
  if (!(radius > 0.0)) {
    r.skipped = true;
    return r;
  }
  // Windows thinner than a cell hold no resolvable mass beyond the centre cell.
  if (radius <= s.u.grid().dx()) {
    r.skipped = true;
    return r;
  }
  const WindowedMass wm = windowed_mass_sup(s.u, r.window);
  r.best_mass = wm.best_mass;
  r.y1 = wm.y1;
  r.y2 = wm.y2;
  r.clamped = wm.clamped;
  return r;
}

void require_sorted(std::span<const Snapshot> snapshots) {
  for (std::size_t i = 1; i < snapshots.size(); ++i) {
    if (!(snapshots[i].t > snapshots[i - 1].t)) {
      throw UsageError("snapshots must be strictly increasing in t");
    }
  }
}

double min_ratio_over(std::span<const Snapshot> snapshots, std::size_t begin,
                      const LambdaSchedule& schedule, double threshold) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = begin; i < snapshots.size(); ++i) {
    const double radius = schedule(snapshots[i].t);
    if (!(radius > snapshots[i].u.grid().dx())) continue;
    best = std::min(best, windowed_mass_sup(snapshots[i].u, {WindowShape::kDisk, radius}).best_mass);
  }
  return std::isfinite(best) ? best / threshold : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

Theorem6Trace theorem6_trace(std::span<const Snapshot> snapshots, const LambdaSchedule& schedule,
                             double c_opt, const OperatorParams& p) {
  schedule.validate();
  p.validate();
  if (!(c_opt > 0.0)) throw UsageError("c_opt must be positive");
  if (snapshots.empty()) throw UsageError("theorem6_trace: no snapshots");
  require_sorted(snapshots);

  Theorem6Trace out;
  out.records.resize(snapshots.size());
  parallel_for(snapshots.size(), [&](std::size_t i) {
    out.records[i] = disk_record(snapshots[i], schedule(snapshots[i].t), p);
  });

  Theorem6Summary& sum = out.summary;
  sum.threshold = 2.0 / c_opt;
  const double g_last = out.records.back().gradient_norm_sq;
  sum.terminal_begin = out.records.size() - 1;
  while (sum.terminal_begin > 0 && out.records[sum.terminal_begin - 1].gradient_norm_sq >= 0.1 * g_last) {
    --sum.terminal_begin;
  }

  sum.min_best_mass = std::numeric_limits<double>::infinity();
  bool first = true;
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    const ConcentrationRecord& r = out.records[i];
    if (r.skipped) {
      ++sum.skipped;
      continue;
    }
    if (i < sum.terminal_begin) continue;
    sum.min_best_mass = std::min(sum.min_best_mass, r.best_mass);
    sum.terminal_ratio = r.best_mass / sum.threshold;
    const double lg = r.window.size * std::sqrt(r.gradient_norm_sq);
    if (first) {
      sum.lambda_grad_first = lg;
      first = false;
    }
    sum.lambda_grad_last = lg;
  }
  if (first) sum.min_best_mass = 0.0;
  sum.ratio = sum.min_best_mass / sum.threshold;
  sum.lambda_grad_grows = !first && sum.lambda_grad_last > sum.lambda_grad_first;

  const double shift = 0.02 * std::max(std::abs(schedule.t_star), schedule.t_star - snapshots.front().t);
  LambdaSchedule lo = schedule, hi = schedule;
  lo.t_star -= shift;
  hi.t_star += shift;
  sum.ratio_t_star_minus = min_ratio_over(snapshots, sum.terminal_begin, lo, sum.threshold);
  sum.ratio_t_star_plus = min_ratio_over(snapshots, sum.terminal_begin, hi, sum.threshold);
  return out;
}

Theorem7Trace theorem7_trace(std::span<const Snapshot> snapshots, double c_side, double t_star,
                             double eta) {
  if (!(c_side > 0.0)) throw UsageError("C_side must be positive");
  if (!(eta >= 0.0)) throw UsageError("eta must be nonnegative");
  if (snapshots.empty()) throw UsageError("theorem7_trace: no snapshots");
  require_sorted(snapshots);

  Theorem7Trace out;
  out.records.resize(snapshots.size());
  parallel_for(snapshots.size(), [&](std::size_t i) {
    const Snapshot& s = snapshots[i];
    SquareRecord& r = out.records[i];
    r.t = s.t;
    if (!(s.t < t_star)) {
      r.skipped = true;
      return;
    }
    r.side = c_side * std::sqrt(t_star - s.t);
    if (!(r.side > s.u.grid().dx())) {
      r.skipped = true;
      return;
    }
    const WindowedMass wm = windowed_mass_sup(s.u, {WindowShape::kSquare, r.side});
    r.best_mass = wm.best_mass;
    r.sqrt_best_mass = std::sqrt(wm.best_mass);
    r.y1 = wm.y1;
    r.y2 = wm.y2;
    r.clamped = wm.clamped;
  });

  Theorem7Summary& sum = out.summary;
  sum.eta = eta;
  std::size_t last = out.records.size();
  while (last > 0 && out.records[last - 1].skipped) --last;
  for (const auto& r : out.records) sum.skipped += r.skipped ? 1 : 0;
  if (last == 0) return out;

  const double gap_last = t_star - out.records[last - 1].t;
  sum.terminal_begin = last - 1;
  while (sum.terminal_begin > 0 && t_star - out.records[sum.terminal_begin - 1].t <= 10.0 * gap_last) {
    --sum.terminal_begin;
  }
  sum.min_sqrt_best = std::numeric_limits<double>::infinity();
  for (std::size_t i = sum.terminal_begin; i < last; ++i) {
    if (out.records[i].skipped) continue;
    sum.max_sqrt_best = std::max(sum.max_sqrt_best, out.records[i].sqrt_best_mass);
    sum.min_sqrt_best = std::min(sum.min_sqrt_best, out.records[i].sqrt_best_mass);
  }
  if (!std::isfinite(sum.min_sqrt_best)) sum.min_sqrt_best = 0.0;
  sum.above_eta = sum.min_sqrt_best > eta;
  return out;
}

}  // namespace dsbu
