#include "peup/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace peup::fft {
namespace {

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

// The FFTW planner is not thread-safe; execution of an existing plan is.
// Plans are created once per (size, sign) on fftw_malloc'd buffers and later
// executed through the new-array interface on buffers with the same alignment.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    FftwBuffer in(static_cast<std::size_t>(n));
    FftwBuffer out(static_cast<std::size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(n, in.data, out.data, sign, FFTW_ESTIMATE);
    if (plan == nullptr) throw std::runtime_error("fftw: planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

std::vector<Complex> transform(std::span<const Complex> in, int sign) {
  const std::size_t n = in.size();
  if (n == 0) return {};
  fftw_plan plan = cache().get(static_cast<int>(n), sign);
  FftwBuffer src(n);
  FftwBuffer dst(n);
  std::memcpy(src.data, in.data(), n * sizeof(fftw_complex));
  fftw_execute_dft(plan, src.data, dst.data);
  std::vector<Complex> out(n);
  std::memcpy(static_cast<void*>(out.data()), dst.data, n * sizeof(fftw_complex));
  return out;
}

}  // namespace

std::vector<Complex> forward(std::span<const Complex> in) { return transform(in, FFTW_FORWARD); }

std::vector<Complex> backward(std::span<const Complex> in) { return transform(in, FFTW_BACKWARD); }

}  // namespace peup::fft
