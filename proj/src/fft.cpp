#include "mcdbp/fft.hpp"

#include <fftw3.h>

#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mcdbp::fft {

namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  fftw_complex* scratch = nullptr;
};

// Plan creation is not thread safe; execution via fftw_execute_dft on
// distinct arrays is. Plans are cached per size and reused by all workers.
class PlanCache {
 public:
  const PlanPair& get(std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;

    PlanPair p;
    p.scratch = fftw_alloc_complex(n);
    if (!p.scratch) throw std::bad_alloc();
    const int len = static_cast<int>(n);
    const unsigned flags = (n >= 32768 ? FFTW_MEASURE : FFTW_ESTIMATE) | FFTW_DESTROY_INPUT;
    p.forward = fftw_plan_dft_1d(len, p.scratch, p.scratch, FFTW_FORWARD, flags);
    p.inverse = fftw_plan_dft_1d(len, p.scratch, p.scratch, FFTW_BACKWARD, flags);
    if (!p.forward || !p.inverse) throw std::runtime_error("FFTW plan creation failed");
    return plans_.emplace(n, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

bool aligned_like_plans(const void* p) {
  // fftw_alloc_complex returns 16-byte (SIMD) aligned memory; our field
  // buffers are 64-byte aligned, so new-array execution is valid.
  return (reinterpret_cast<std::uintptr_t>(p) & 0xF) == 0;
}

void execute(ComplexVec& data, bool forward_dir) {
  if (data.empty()) return;
  const auto& plans = cache().get(data.size());
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  const fftw_plan plan = forward_dir ? plans.forward : plans.inverse;
  if (aligned_like_plans(ptr)) {
    fftw_execute_dft(plan, ptr, ptr);
  } else {
    // Fallback for buffers not allocated through AlignedAllocator.
    for (std::size_t i = 0; i < data.size(); ++i) {
      plans.scratch[i][0] = data[i].real();
      plans.scratch[i][1] = data[i].imag();
    }
    fftw_execute_dft(plan, plans.scratch, plans.scratch);
    for (std::size_t i = 0; i < data.size(); ++i)
      data[i] = {plans.scratch[i][0], plans.scratch[i][1]};
  }
}

}  // namespace

void forward(ComplexVec& data) { execute(data, true); }

void inverse(ComplexVec& data) {
  execute(data, false);
  const double inv_n = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= inv_n;
}

}  // namespace mcdbp::fft
