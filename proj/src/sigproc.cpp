#include "mcdbp/sigproc.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "mcdbp/fft.hpp"

namespace mcdbp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// The selection filter's own roll-off; the spec of the aggregate-band RRC.
constexpr double kSelectionRolloff = 0.001;

void check_grid_match(const SampledField& a, const SampledField& b) {
  if (a.size() != b.size() || a.sample_rate_hz != b.sample_rate_hz)
    throw std::invalid_argument("mismatched sample grids");
}

// delta_f as an exact bin count, or throws.
long shift_bins(double delta_f_hz, double sample_rate_hz, std::size_t n) {
  const double bin = sample_rate_hz / double(n);
  const double k = delta_f_hz / bin;
  const long k_round = std::lround(k);
  if (std::abs(k - double(k_round)) > 1e-9 * std::max(1.0, std::abs(k)))
    throw std::invalid_argument("frequency shift is off the cyclic grid (must be a multiple of "
                                "sample_rate/N)");
  return k_round;
}

}  // namespace

double rrc_response(double freq_hz, const RrcSpec& spec) {
  const double f = std::abs(freq_hz);
  const double f1 = (1.0 - spec.rolloff) / (2.0 * spec.symbol_period_s);
  const double f2 = (1.0 + spec.rolloff) / (2.0 * spec.symbol_period_s);
  if (f <= f1) return 1.0;
  if (f >= f2) return 0.0;
  const double u = (f * spec.symbol_period_s - 0.5 * (1.0 - spec.rolloff)) / spec.rolloff;
  return std::cos(0.5 * M_PI * u);
}

SampledField shape_channel(const SymbolFrame& frame, const RrcSpec& spec, double sample_rate_hz) {
  const std::size_t n_sym = frame.x_pol.size();
  if (n_sym == 0 || frame.y_pol.size() != n_sym)
    throw std::invalid_argument("shape_channel: empty or unbalanced frame");
  if (sample_rate_hz < (1.0 + spec.rolloff) / spec.symbol_period_s)
    throw std::invalid_argument("shape_channel: sample rate below the occupied RRC bandwidth");
  const double spp = sample_rate_hz * spec.symbol_period_s;
  const auto oversampling = static_cast<std::size_t>(std::lround(spp));
  if (std::abs(spp - double(oversampling)) > 1e-9 || oversampling < 1)
    throw std::invalid_argument("shape_channel: sample rate must be an integer multiple of the "
                                "symbol rate");
  const std::size_t n = n_sym * oversampling;

  SampledField out;
  out.sample_rate_hz = sample_rate_hz;
  out.centre_frequency_offset_hz = 0.0;

  auto shape_pol = [&](const std::vector<cdouble>& symbols, ComplexVec& pol) {
    // Spectrum of the zero-inserted impulse train is the N_sym-point DFT of
    // the symbols tiled across the aggregate grid.
    ComplexVec sym_spec(symbols.begin(), symbols.end());
    fft::forward(sym_spec);
    pol.assign(n, cdouble{});
    for (std::size_t k = 0; k < n; ++k) {
      const double f = fft::bin_frequency(k, n, sample_rate_hz);
      const double h = rrc_response(f, spec);
      if (h != 0.0) pol[k] = sym_spec[k % n_sym] * h;
    }
    fft::inverse(pol);
  };
  shape_pol(frame.x_pol, out.x_pol);
  shape_pol(frame.y_pol, out.y_pol);

  const double p = out.total_power();
  if (p <= 0.0) throw std::invalid_argument("shape_channel: silent frame");
  out.scale(1.0 / std::sqrt(p));
  return out;
}

SampledField frequency_shift(const SampledField& field, double delta_f_hz) {
  if (std::abs(delta_f_hz) >= field.sample_rate_hz / 2.0)
    throw std::invalid_argument("frequency_shift: |delta_f| must be below sample_rate/2");
  const long bins = shift_bins(delta_f_hz, field.sample_rate_hz, field.size());

  SampledField out = field;
  if (bins == 0) return out;
  const std::size_t n = field.size();
  // exp(i 2 pi (bins/N) n) is exactly cyclic for integer bin shifts. The
  // phase index is reduced modulo N in integer arithmetic so the rotation
  // stays full-precision across arbitrarily long frames.
  const auto n_i = static_cast<std::int64_t>(n);
  const std::int64_t bins_mod = ((bins % n_i) + n_i) % n_i;
  const double scale = kTwoPi / double(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t idx = (bins_mod * static_cast<std::int64_t>(i)) % n_i;
    const cdouble rot = std::polar(1.0, scale * double(idx));
    out.x_pol[i] *= rot;
    out.y_pol[i] *= rot;
  }
  out.centre_frequency_offset_hz += delta_f_hz;
  return out;
}

SampledField multiplex(const std::vector<SampledField>& channel_fields, double spacing_hz) {
  if (channel_fields.empty()) throw std::invalid_argument("multiplex: no channels");
  if (channel_fields.size() % 2 == 0)
    throw std::invalid_argument("multiplex: channel count must be odd (a central channel exists)");
  const int n_ch = static_cast<int>(channel_fields.size());
  const int centre = (n_ch - 1) / 2;
  for (const auto& f : channel_fields) check_grid_match(channel_fields.front(), f);

  SampledField out;
  out.sample_rate_hz = channel_fields.front().sample_rate_hz;
  out.centre_frequency_offset_hz = 0.0;
  out.x_pol.assign(channel_fields.front().size(), cdouble{});
  out.y_pol.assign(channel_fields.front().size(), cdouble{});
  for (int i = 0; i < n_ch; ++i) {
    const double offset = (i - centre) * spacing_hz;
    SampledField shifted = frequency_shift(channel_fields[i], offset);
    for (std::size_t k = 0; k < out.size(); ++k) {
      out.x_pol[k] += shifted.x_pol[k];
      out.y_pol[k] += shifted.y_pol[k];
    }
  }
  return out;
}

SampledField set_launch_power(const SampledField& field, double per_channel_dbm, int n_channels) {
  const double current = field.total_power();
  if (current <= 0.0) throw std::invalid_argument("set_launch_power: zero-power input");
  const double target = n_channels * dbm_to_watts(per_channel_dbm);
  SampledField out = field;
  out.scale(std::sqrt(target / current));
  return out;
}

SampledField bandwidth_select(const SampledField& field, double bandwidth_hz,
                              SelectionShape shape) {
  if (bandwidth_hz > field.sample_rate_hz)
    throw std::invalid_argument("bandwidth_select: bandwidth exceeds the sample rate");
  if (bandwidth_hz <= 0.0) throw std::invalid_argument("bandwidth_select: bandwidth must be positive");

  SampledField out = field;
  const std::size_t n = field.size();
  const RrcSpec agg{1.0 / bandwidth_hz, kSelectionRolloff};
  fft::forward(out.x_pol);
  fft::forward(out.y_pol);
  for (std::size_t k = 0; k < n; ++k) {
    const double f = fft::bin_frequency(k, n, field.sample_rate_hz);
    double h;
    if (shape == SelectionShape::ideal_brickwall)
      h = (std::abs(f) <= bandwidth_hz / 2.0) ? 1.0 : 0.0;
    else
      h = rrc_response(f, agg);
    out.x_pol[k] *= h;
    out.y_pol[k] *= h;
  }
  fft::inverse(out.x_pol);
  fft::inverse(out.y_pol);
  return out;
}

ReceivedSymbols matched_filter_downsample(const SampledField& field, int channel_index,
                                          const RrcSpec& spec, int n_channels,
                                          double spacing_hz) {
  if (channel_index < 0 || channel_index >= n_channels)
    throw std::invalid_argument("matched_filter_downsample: channel index out of range");
  const double spp = field.sample_rate_hz * spec.symbol_period_s;
  const auto oversampling = static_cast<std::size_t>(std::lround(spp));
  if (std::abs(spp - double(oversampling)) > 1e-9 || oversampling < 1)
    throw std::invalid_argument("matched_filter_downsample: non-integer samples per symbol");
  const std::size_t n = field.size();
  if (n % oversampling != 0)
    throw std::invalid_argument("matched_filter_downsample: frame not a whole number of symbols");
  const std::size_t n_sym = n / oversampling;

  const double offset = (channel_index - (n_channels - 1) / 2) * spacing_hz;
  const SampledField base = (offset == 0.0) ? field : frequency_shift(field, -offset);

  ReceivedSymbols out;
  auto demod_pol = [&](const ComplexVec& pol, std::vector<cdouble>& syms) {
    ComplexVec spec_buf(pol.begin(), pol.end());
    fft::forward(spec_buf);
    // Matched filter then decimation: fold the filtered spectrum onto the
    // symbol-rate grid (cyclic frames make this exact).
    ComplexVec folded(n_sym, cdouble{});
    for (std::size_t k = 0; k < n; ++k) {
      const double f = fft::bin_frequency(k, n, field.sample_rate_hz);
      const double h = rrc_response(f, spec);
      if (h != 0.0) folded[k % n_sym] += spec_buf[k] * h;
    }
    fft::inverse(folded);
    syms.assign(folded.begin(), folded.end());
    const double inv_o = 1.0 / double(oversampling);
    for (auto& s : syms) s *= inv_o;
  };
  demod_pol(base.x_pol, out.x_pol);
  demod_pol(base.y_pol, out.y_pol);
  return out;
}

namespace {
struct FieldHeader {
  char magic[8] = {'M', 'C', 'D', 'B', 'P', 'F', 'L', 'D'};
  std::uint32_t version = 1;
  std::uint32_t reserved = 0;
  std::uint64_t n_samples = 0;
  double sample_rate_hz = 0.0;
  double centre_frequency_offset_hz = 0.0;
};
}  // namespace

void dump_field(const SampledField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open field dump file: " + path);
  FieldHeader header;
  header.n_samples = field.size();
  header.sample_rate_hz = field.sample_rate_hz;
  header.centre_frequency_offset_hz = field.centre_frequency_offset_hz;
  out.write(reinterpret_cast<const char*>(&header), sizeof header);
  auto write_pol = [&](const ComplexVec& pol) {
    for (const auto& s : pol) {
      const float re = static_cast<float>(s.real());
      const float im = static_cast<float>(s.imag());
      out.write(reinterpret_cast<const char*>(&re), sizeof re);
      out.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
  };
  write_pol(field.x_pol);
  write_pol(field.y_pol);
}

SampledField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open field dump file: " + path);
  FieldHeader header;
  in.read(reinterpret_cast<char*>(&header), sizeof header);
  if (!in || std::string(header.magic, 8) != "MCDBPFLD" || header.version != 1)
    throw std::runtime_error("not an mcdbp field dump: " + path);
  SampledField field;
  field.sample_rate_hz = header.sample_rate_hz;
  field.centre_frequency_offset_hz = header.centre_frequency_offset_hz;
  auto read_pol = [&](ComplexVec& pol) {
    pol.resize(header.n_samples);
    for (auto& s : pol) {
      float re = 0, im = 0;
      in.read(reinterpret_cast<char*>(&re), sizeof re);
      in.read(reinterpret_cast<char*>(&im), sizeof im);
      s = {re, im};
    }
  };
  read_pol(field.x_pol);
  read_pol(field.y_pol);
  if (!in) throw std::runtime_error("truncated field dump: " + path);
  return field;
}

void export_spectrum_csv(const SampledField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open spectrum file: " + path);
  ComplexVec sx(field.x_pol.begin(), field.x_pol.end());
  ComplexVec sy(field.y_pol.begin(), field.y_pol.end());
  fft::forward(sx);
  fft::forward(sy);
  const std::size_t n = field.size();
  out << "frequency_Hz,psd_dB\n";
  char buf[96];
  // Emit in ascending frequency order (negative half first).
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + (n + 1) / 2) % n;
    const double f = fft::bin_frequency(k, n, field.sample_rate_hz);
    const double psd = (std::norm(sx[k]) + std::norm(sy[k])) / double(n) / double(n);
    const double psd_db = 10.0 * std::log10(psd + 1e-300);
    std::snprintf(buf, sizeof buf, "%.9g,%.6f\n", f, psd_db);
    out << buf;
  }
}

double band_power(const SampledField& field, double centre_offset_hz, double bandwidth_hz) {
  ComplexVec sx(field.x_pol.begin(), field.x_pol.end());
  ComplexVec sy(field.y_pol.begin(), field.y_pol.end());
  fft::forward(sx);
  fft::forward(sy);
  const std::size_t n = field.size();
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double f = fft::bin_frequency(k, n, field.sample_rate_hz);
    if (std::abs(f - centre_offset_hz) <= bandwidth_hz / 2.0)
      acc += std::norm(sx[k]) + std::norm(sy[k]);
  }
  // Parseval: sum |X|^2 / N^2 equals the mean-square time-domain power.
  return acc / double(n) / double(n);
}

}  // namespace mcdbp
