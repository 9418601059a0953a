#pragma once

// Shared helpers for the test suites: least-squares residuals, spectral
// probes, and small frame builders.

#include <cmath>
#include <complex>
#include <vector>

#include "mcdbp/field.hpp"
#include "mcdbp/fft.hpp"
#include "mcdbp/modem.hpp"

namespace testsup {

using mcdbp::cdouble;

// Residual error power after removing the best complex gain, relative to the
// reference power: min_h E|b - h a|^2 / E|b|^2.
inline double ls_residual(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  cdouble cross{};
  double pa = 0.0, pb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cross += std::conj(a[i]) * b[i];
    pa += std::norm(a[i]);
    pb += std::norm(b[i]);
  }
  const cdouble h = cross / pa;
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) err += std::norm(b[i] - h * a[i]);
  return err / pb;
}

inline double ls_residual_field(const mcdbp::SampledField& ref, const mcdbp::SampledField& out) {
  std::vector<cdouble> a(ref.x_pol.begin(), ref.x_pol.end());
  a.insert(a.end(), ref.y_pol.begin(), ref.y_pol.end());
  std::vector<cdouble> b(out.x_pol.begin(), out.x_pol.end());
  b.insert(b.end(), out.y_pol.begin(), out.y_pol.end());
  return ls_residual(a, b);
}

// Relative energy of the difference, no gain removal.
inline double rel_error_field(const mcdbp::SampledField& ref, const mcdbp::SampledField& out) {
  double err = 0.0, p = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    err += std::norm(out.x_pol[i] - ref.x_pol[i]) + std::norm(out.y_pol[i] - ref.y_pol[i]);
    p += std::norm(ref.x_pol[i]) + std::norm(ref.y_pol[i]);
  }
  return err / p;
}

inline std::size_t spectral_peak_bin(const mcdbp::SampledField& f) {
  mcdbp::ComplexVec s(f.x_pol.begin(), f.x_pol.end());
  mcdbp::fft::forward(s);
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (std::norm(s[k]) > best_mag) {
      best_mag = std::norm(s[k]);
      best = k;
    }
  }
  return best;
}

inline mcdbp::SymbolFrame random_frame(int channel, int order, std::size_t n,
                                       std::uint64_t seed) {
  return mcdbp::generate_frame(channel, mcdbp::build_constellation(order), n, seed);
}

}  // namespace testsup
