#pragma once

#include "mcdbp/field.hpp"

namespace mcdbp::fft {

// In-place complex transforms backed by FFTW with a per-size plan cache.
// forward is unnormalised; inverse applies 1/N, so inverse(forward(x)) == x.
void forward(ComplexVec& data);
void inverse(ComplexVec& data);

// FFT bin k -> baseband frequency in Hz (negative frequencies in the upper
// half, Nyquist bin mapped to +fs/2).
inline double bin_frequency(std::size_t k, std::size_t n, double sample_rate_hz) {
  const auto idx = (k <= n / 2) ? static_cast<double>(k)
                                : static_cast<double>(k) - static_cast<double>(n);
  return idx * sample_rate_hz / static_cast<double>(n);
}

}  // namespace mcdbp::fft
