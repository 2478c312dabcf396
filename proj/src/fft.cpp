#include "dsbu/fft.hpp"

#include <fftw3.h>

#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>

namespace dsbu::fft {
namespace {

// The FFTW planner is not reentrant; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// Plans are per thread. FFTW_ESTIMATE keeps the chosen algorithm independent
// of timing noise, so reruns are bitwise reproducible.
class PlanCache {
 public:
  ~PlanCache() {
    std::lock_guard lock(planner_mutex());
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.fwd);
      fftw_destroy_plan(p.bwd);
      fftw_destroy_plan(p.r2c);
      fftw_destroy_plan(p.c2r);
    }
  }

  const Plans& get(int n) {
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::lock_guard lock(planner_mutex());
    const std::size_t count = static_cast<std::size_t>(n) * n;
    auto* buf = fftw_alloc_complex(count);
    auto* half = fftw_alloc_complex(static_cast<std::size_t>(n) * (n / 2 + 1));
    auto* real = fftw_alloc_real(count);
    if (buf == nullptr || half == nullptr || real == nullptr) throw std::bad_alloc();
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p;
    p.fwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags);
    p.bwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags);
    p.r2c = fftw_plan_dft_r2c_2d(n, n, real, half, flags);
    p.c2r = fftw_plan_dft_c2r_2d(n, n, half, real, flags);
    fftw_free(buf);
    fftw_free(half);
    fftw_free(real);
    if (!p.fwd || !p.bwd || !p.r2c || !p.c2r) throw std::runtime_error("FFTW planning failed");
    return plans_.emplace(n, p).first->second;
  }

 private:
  std::map<int, Plans> plans_;
};

PlanCache& cache() {
  thread_local PlanCache c;
  return c;
}

fftw_complex* as_fftw(std::span<Complex> data) {
  return reinterpret_cast<fftw_complex*>(data.data());
}

void scale(std::span<Complex> data, int n) {
  const double s = 1.0 / (static_cast<double>(n) * n);
  for (auto& v : data) v *= s;
}

}  // namespace

void forward(std::span<Complex> data, int n) {
  fftw_execute_dft(cache().get(n).fwd, as_fftw(data), as_fftw(data));
}

void inverse(std::span<Complex> data, int n) {
  fftw_execute_dft(cache().get(n).bwd, as_fftw(data), as_fftw(data));
  scale(data, n);
}

void forward_real(std::span<const double> in, std::span<Complex> half, int n) {
  // r2c does not modify its input.
  fftw_execute_dft_r2c(cache().get(n).r2c, const_cast<double*>(in.data()), as_fftw(half));
}

void inverse_real(std::span<Complex> half, std::span<double> out, int n) {
  fftw_execute_dft_c2r(cache().get(n).c2r, as_fftw(half), out.data());
  const double s = 1.0 / (static_cast<double>(n) * n);
  for (auto& v : out) v *= s;
}

}  // namespace dsbu::fft
