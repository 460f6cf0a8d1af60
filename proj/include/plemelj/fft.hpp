#pragma once

#include <fftw3.h>

#include <mutex>
#include <span>

#include "plemelj/core.hpp"

namespace plemelj {

namespace detail {
// FFTW planning is not thread safe; execution is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwPlan {
  fftw_plan plan = nullptr;
  FftwPlan(int rank, const int* dims, cplx* data, int sign) {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    auto* p = reinterpret_cast<fftw_complex*>(data);
    plan = fftw_plan_dft(rank, dims, p, p, sign, FFTW_ESTIMATE);
  }
  ~FftwPlan() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (plan) fftw_destroy_plan(plan);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
};
}  // namespace detail

// Unnormalized in-place transform; forward uses e^{-i...}.
inline void fft(std::span<cplx> data, bool inverse = false) {
  if (data.empty()) return;
  const int n = static_cast<int>(data.size());
  detail::FftwPlan p(1, &n, data.data(), inverse ? FFTW_BACKWARD : FFTW_FORWARD);
  fftw_execute(p.plan);
}

// Row-major 2D transform, rows x cols.
inline void fft2(std::span<cplx> data, int rows, int cols, bool inverse = false) {
  if (static_cast<std::size_t>(rows) * cols != data.size()) fail(ErrorKind::InvalidInput, "fft2 shape mismatch");
  const int dims[2] = {rows, cols};
  detail::FftwPlan p(2, dims, data.data(), inverse ? FFTW_BACKWARD : FFTW_FORWARD);
  fftw_execute(p.plan);
}

}  // namespace plemelj
