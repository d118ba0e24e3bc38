#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <vector>

namespace swlw {

namespace detail {
// FFTW's planner is not thread-safe; execution is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// In-place complex DFT of a fixed shape (1-D of size n, or 3-D n^3) with
/// FFTW's sign convention: forward computes sum_j f_j exp(-2 pi i jk/n).
/// The inverse is unnormalized; callers divide by size().
class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : FftPlan(n, 1) {}

  static FftPlan cube(std::size_t n) { return FftPlan(n, 3); }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&& o) noexcept : n_(o.n_), total_(o.total_), buf_(o.buf_), fwd_(o.fwd_), bwd_(o.bwd_) {
    o.buf_ = nullptr;
    o.fwd_ = o.bwd_ = nullptr;
  }

  ~FftPlan() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    if (fwd_) fftw_destroy_plan(fwd_);
    if (bwd_) fftw_destroy_plan(bwd_);
    if (buf_) fftw_free(buf_);
  }

  std::size_t size() const { return total_; }
  std::size_t extent() const { return n_; }

  std::span<std::complex<double>> buffer() {
    return {reinterpret_cast<std::complex<double>*>(buf_), total_};
  }

  void forward() { fftw_execute(fwd_); }
  void backward() { fftw_execute(bwd_); }

 private:
  FftPlan(std::size_t n, int rank) : n_(n) {
    total_ = rank == 3 ? n * n * n : n;
    std::lock_guard lock(detail::fftw_planner_mutex());
    buf_ = fftw_alloc_complex(total_);
    const int ni = static_cast<int>(n);
    if (rank == 3) {
      fwd_ = fftw_plan_dft_3d(ni, ni, ni, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
      bwd_ = fftw_plan_dft_3d(ni, ni, ni, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
      fwd_ = fftw_plan_dft_1d(ni, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
      bwd_ = fftw_plan_dft_1d(ni, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
  }

  std::size_t n_;
  std::size_t total_;
  fftw_complex* buf_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

/// Signed integer wavenumber of DFT bin k: [0, n/2) then [-n/2, 0).
inline long signed_mode(std::size_t k, std::size_t n) {
  const long kk = static_cast<long>(k);
  const long nn = static_cast<long>(n);
  return kk < (nn + 1) / 2 ? kk : kk - nn;
}

}  // namespace swlw
