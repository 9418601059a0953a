#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "mcdbp/config.hpp"

namespace mcdbp {

// Unit-average-energy square QAM with an independent Gray code per I/Q axis.
struct Constellation {
  int order = 0;                              // M
  std::vector<std::complex<double>> points;   // mean |point|^2 == 1
  std::vector<std::uint16_t> labels;          // Gray label per point, log2(M) bits

  int bits() const;
  std::string label_string(std::size_t i) const;  // e.g. "0110" for M=16
};

Constellation build_constellation(int order);  // M in {4, 16, 64, 256}
Constellation build_constellation(ModFormat format);

struct SymbolFrame {
  int channel_index = 0;
  std::vector<std::complex<double>> x_pol, y_pol;
  std::uint64_t x_seed = 0, y_seed = 0;  // derived per-stream seeds, for the record
};

// I.i.d. uniform draws over the alphabet. Deterministic for fixed
// (master_seed, channel_index, polarisation); distinct channels and
// polarisations use independent derived streams.
SymbolFrame generate_frame(int channel_index, const Constellation& constellation,
                           std::size_t n_symbols, std::uint64_t master_seed);

// Cyclically shifts y_pol by n_symbols/2; x_pol unchanged. Involution.
SymbolFrame decorrelate_polarizations(SymbolFrame frame);

// Debug dump: raw interleaved complex64 (float32 re, float32 im),
// channel-major, x polarisation then y.
void dump_frames(const std::vector<SymbolFrame>& frames, const std::string& path);

}  // namespace mcdbp
