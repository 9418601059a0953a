#pragma once

#include <complex>
#include <cstdlib>
#include <new>
#include <vector>

namespace mcdbp {

using cdouble = std::complex<double>;

// 64-byte aligned storage so FFTW SIMD plans can run on field data directly.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t alignment = 64;

  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) {}

  T* allocate(std::size_t n) {
    void* p = std::aligned_alloc(alignment, ((n * sizeof(T) + alignment - 1) / alignment) * alignment);
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { std::free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const { return true; }
  template <class U>
  bool operator!=(const AlignedAllocator<U>&) const { return false; }
};

using ComplexVec = std::vector<cdouble, AlignedAllocator<cdouble>>;

// Dual-polarisation complex baseband waveform on a uniform cyclic grid.
struct SampledField {
  ComplexVec x_pol, y_pol;
  double sample_rate_hz = 0.0;
  double centre_frequency_offset_hz = 0.0;  // relative to the comb centre

  std::size_t size() const { return x_pol.size(); }

  // Mean over samples of |x|^2 + |y|^2 (watts for a field in sqrt(W) units).
  double total_power() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < x_pol.size(); ++i)
      acc += std::norm(x_pol[i]) + std::norm(y_pol[i]);
    return x_pol.empty() ? 0.0 : acc / double(x_pol.size());
  }

  void scale(double amplitude_factor) {
    for (auto& v : x_pol) v *= amplitude_factor;
    for (auto& v : y_pol) v *= amplitude_factor;
  }
};

}  // namespace mcdbp
