#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcdbp/constants.hpp"

namespace mcdbp {

enum class ModFormat { qpsk, qam16, qam64, qam256 };

int format_order(ModFormat f);
int format_bits(ModFormat f);
const char* format_name(ModFormat f);
std::optional<ModFormat> parse_format(const std::string& name);

enum class StepRule { logarithmic, uniform };
enum class SelectionShape { rrc_aggregate, ideal_brickwall };
enum class DbpNormalization { total_band, center_channel };
enum class ScalePreset { custom, desk, paper };

struct WdmSpec {
  int n_channels = 0;
  double symbol_rate_hz = 0.0;
  double channel_spacing_hz = 0.0;
  double rolloff = 0.0;
  double centre_wavelength_m = 0.0;
  ModFormat format = ModFormat::qpsk;
  std::size_t n_symbols = 0;
  int sim_oversampling = 0;  // samples per symbol on the aggregate grid

  double sample_rate_hz() const { return sim_oversampling * symbol_rate_hz; }
  double aggregate_bandwidth_hz() const { return n_channels * channel_spacing_hz; }
  int centre_channel() const { return (n_channels - 1) / 2; }
  // Offset of channel i relative to the comb centre.
  double channel_offset_hz(int i) const { return (i - centre_channel()) * channel_spacing_hz; }
};

struct FiberSpec {
  double alpha_db_per_km = 0.0;
  double dispersion_ps_nm_km = 0.0;
  double gamma_per_w_km = 0.0;
  double manakov_factor = 8.0 / 9.0;
  double span_length_km = 0.0;
  int steps_per_span = 0;
  StepRule step_rule = StepRule::logarithmic;

  double alpha_np_per_m() const { return db_per_km_to_np_per_m(alpha_db_per_km); }
  double span_length_m() const { return span_length_km * 1000.0; }
  double gamma_per_w_m() const { return gamma_per_w_km / 1000.0; }
};

struct LinkSpec {
  int n_spans = 0;
  FiberSpec fiber;
  double noise_figure_db = 0.0;
  bool noiseless = false;
};

struct DbpSpec {
  double bandwidth_hz = 0.0;
  int steps_per_span = 0;
  SelectionShape filter_shape = SelectionShape::rrc_aggregate;
  DbpNormalization power_normalization = DbpNormalization::total_band;
  double launch_power_dbm = 0.0;  // known per-channel launch power
};

struct MrnspsSettings {
  double snr_tolerance_db = 0.1;
  double air_tolerance_frac = 0.005;  // fraction of the format's rate ceiling
};

struct SystemConfig {
  WdmSpec wdm;
  LinkSpec link;
  std::optional<DbpSpec> dbp;  // nullopt = EDC-only receiver
  double launch_power_dbm = 0.0;
  std::uint64_t master_seed = 1;
  ScalePreset scale_preset = ScalePreset::custom;
  MrnspsSettings mrnsps;

  bool operator==(const SystemConfig&) const;
};

// Full Table-scale system: 9 channels, 25 spans, 800 steps/span, 2^18 symbols.
// Long-running; intended for the opt-in reproduction study.
SystemConfig paper_preset();
// Reduced system for development and the test suite: 3 channels, 10 spans,
// 200 steps/span, 2^13 symbols. Runs in seconds per point.
SystemConfig desk_preset();

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value document with dotted section names; '#' starts a comment.
SystemConfig load_config(const std::string& text);
SystemConfig load_config_file(const std::string& path);
std::string serialize_config(const SystemConfig& cfg);

// Applies one dotted-key override (the CLI --set mechanism).
void apply_key(SystemConfig& cfg, const std::string& key, const std::string& value);
// MCDBP_MASTER_SEED overrides master_seed; nothing else is read from the
// environment.
void apply_environment_overrides(SystemConfig& cfg);

// Throws ConfigError naming the violated invariant.
void validate(const SystemConfig& cfg);
// Non-fatal advisories (noise figure below the quantum limit, overlapping
// RRC skirts at sub-guard channel spacing, ...).
std::vector<std::string> validation_warnings(const SystemConfig& cfg);

// beta2 = -D lambda^2 / (2 pi c), returned in ps^2/km (negative for anomalous
// dispersion when D > 0).
double beta2_from_dispersion(double dispersion_ps_nm_km, double wavelength_m);
double span_gain_db(const FiberSpec& fiber);

}  // namespace mcdbp
