#pragma once

#include <string>
#include <vector>

#include "mcdbp/config.hpp"
#include "mcdbp/field.hpp"
#include "mcdbp/modem.hpp"

namespace mcdbp {

struct RrcSpec {
  double symbol_period_s = 0.0;  // T
  double rolloff = 0.0;          // beta in (0,1)
};

// Root-raised-cosine amplitude response, unit passband, even in f:
// 1 for |f| <= (1-b)/2T, cosine-square-root transition up to (1+b)/2T, then 0.
double rrc_response(double freq_hz, const RrcSpec& spec);

// Frequency-domain RRC shaping of the symbol impulse train onto the aggregate
// grid; the output frame is cyclic, at channel baseband, mean power 1.
SampledField shape_channel(const SymbolFrame& frame, const RrcSpec& spec, double sample_rate_hz);

// Multiply by exp(i 2 pi delta_f t). delta_f must sit on the cyclic frequency
// grid (a multiple of sample_rate/N) so the frame stays cyclic.
SampledField frequency_shift(const SampledField& field, double delta_f_hz);

// Sum of channels at offsets k*spacing, k in [-(N-1)/2, (N-1)/2]; centre
// channel at offset 0. All inputs must share the grid; the count must be odd.
SampledField multiplex(const std::vector<SampledField>& channel_fields, double spacing_hz);

// Scales so total average power equals n_channels * 10^((dBm-30)/10) watts.
SampledField set_launch_power(const SampledField& field, double per_channel_dbm, int n_channels);

// Suppresses spectrum outside +-bandwidth/2. rrc_aggregate applies an RRC
// envelope with T' = 1/bandwidth and roll-off 0.1%; ideal_brickwall is a hard
// cut.
SampledField bandwidth_select(const SampledField& field, double bandwidth_hz,
                              SelectionShape shape);

struct ReceivedSymbols {
  std::vector<cdouble> x_pol, y_pol;
};

// Shift the addressed channel to baseband, apply the RRC matched filter and
// decimate to one sample per symbol (ideal synchronisation, zero-phase chain).
// Output scale is the raw chain gain; scoring removes it.
ReceivedSymbols matched_filter_downsample(const SampledField& field, int channel_index,
                                          const RrcSpec& spec, int n_channels,
                                          double spacing_hz);

// Debug field dump/restore: small header plus interleaved complex64 samples,
// x polarisation then y (layout shared with the frame dump).
void dump_field(const SampledField& field, const std::string& path);
SampledField load_field(const std::string& path);

// Two-column CSV: frequency_Hz, psd_dB (centred spectrum).
void export_spectrum_csv(const SampledField& field, const std::string& path);

// Power inside +-bandwidth/2 of the given offset (spectral integration).
double band_power(const SampledField& field, double centre_offset_hz, double bandwidth_hz);

}  // namespace mcdbp
