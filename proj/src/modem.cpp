#include "mcdbp/modem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "mcdbp/rng.hpp"

namespace mcdbp {

int Constellation::bits() const {
  int b = 0;
  for (int m = order; m > 1; m >>= 1) ++b;
  return b;
}

std::string Constellation::label_string(std::size_t i) const {
  const int b = bits();
  std::string s(b, '0');
  for (int k = 0; k < b; ++k)
    if (labels[i] & (1u << (b - 1 - k))) s[k] = '1';
  return s;
}

Constellation build_constellation(int order) {
  if (order != 4 && order != 16 && order != 64 && order != 256)
    throw std::invalid_argument("unsupported QAM order " + std::to_string(order) +
                                " (supported: 4, 16, 64, 256)");
  const int m = static_cast<int>(std::lround(std::sqrt(double(order))));
  // Levels -(m-1), ..., -1, +1, ..., +(m-1); mean energy per 2D point is
  // 2(m^2-1)/3, normalised out.
  const double scale = 1.0 / std::sqrt(2.0 * (m * m - 1) / 3.0);

  Constellation c;
  c.order = order;
  c.points.resize(order);
  c.labels.resize(order);
  int bits_per_axis = 0;
  for (int v = m; v > 1; v >>= 1) ++bits_per_axis;
  for (int ai = 0; ai < m; ++ai) {
    for (int aq = 0; aq < m; ++aq) {
      const int idx = ai * m + aq;
      const double re = (2 * ai - (m - 1)) * scale;
      const double im = (2 * aq - (m - 1)) * scale;
      c.points[idx] = {re, im};
      const auto gray = [](int a) { return a ^ (a >> 1); };
      c.labels[idx] =
          static_cast<std::uint16_t>((gray(ai) << bits_per_axis) | gray(aq));
    }
  }
  return c;
}

Constellation build_constellation(ModFormat format) {
  return build_constellation(format_order(format));
}

SymbolFrame generate_frame(int channel_index, const Constellation& constellation,
                           std::size_t n_symbols, std::uint64_t master_seed) {
  if (n_symbols < 2 || n_symbols % 2 != 0)
    throw std::invalid_argument("generate_frame: n_symbols must be even and >= 2");

  SymbolFrame frame;
  frame.channel_index = channel_index;
  frame.x_seed = derive_seed(master_seed,
                             stream_tag(StreamRole::data, std::uint64_t(channel_index), 0));
  frame.y_seed = derive_seed(master_seed,
                             stream_tag(StreamRole::data, std::uint64_t(channel_index), 1));

  const std::uint64_t mask = std::uint64_t(constellation.order) - 1;  // M is a power of two
  auto fill = [&](std::vector<std::complex<double>>& out, std::uint64_t seed) {
    Prng rng(seed);
    out.resize(n_symbols);
    for (auto& s : out) s = constellation.points[rng.next() & mask];
  };
  fill(frame.x_pol, frame.x_seed);
  fill(frame.y_pol, frame.y_seed);
  return frame;
}

SymbolFrame decorrelate_polarizations(SymbolFrame frame) {
  const std::size_t n = frame.y_pol.size();
  if (n % 2 != 0)
    throw std::invalid_argument("decorrelate_polarizations: frame length must be even");
  std::rotate(frame.y_pol.begin(), frame.y_pol.begin() + n / 2, frame.y_pol.end());
  return frame;
}

void dump_frames(const std::vector<SymbolFrame>& frames, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open frame dump file: " + path);
  auto write_pol = [&](const std::vector<std::complex<double>>& pol) {
    for (const auto& s : pol) {
      const float re = static_cast<float>(s.real());
      const float im = static_cast<float>(s.imag());
      out.write(reinterpret_cast<const char*>(&re), sizeof re);
      out.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
  };
  for (const auto& f : frames) {
    write_pol(f.x_pol);
    write_pol(f.y_pol);
  }
}

}  // namespace mcdbp
