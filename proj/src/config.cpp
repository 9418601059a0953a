#include "mcdbp/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mcdbp {

int format_order(ModFormat f) {
  switch (f) {
    case ModFormat::qpsk: return 4;
    case ModFormat::qam16: return 16;
    case ModFormat::qam64: return 64;
    case ModFormat::qam256: return 256;
  }
  return 0;
}

int format_bits(ModFormat f) {
  switch (f) {
    case ModFormat::qpsk: return 2;
    case ModFormat::qam16: return 4;
    case ModFormat::qam64: return 6;
    case ModFormat::qam256: return 8;
  }
  return 0;
}

const char* format_name(ModFormat f) {
  switch (f) {
    case ModFormat::qpsk: return "QPSK";
    case ModFormat::qam16: return "16QAM";
    case ModFormat::qam64: return "64QAM";
    case ModFormat::qam256: return "256QAM";
  }
  return "?";
}

std::optional<ModFormat> parse_format(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "qpsk" || s == "4qam") return ModFormat::qpsk;
  if (s == "16qam" || s == "qam16") return ModFormat::qam16;
  if (s == "64qam" || s == "qam64") return ModFormat::qam64;
  if (s == "256qam" || s == "qam256") return ModFormat::qam256;
  return std::nullopt;
}

bool SystemConfig::operator==(const SystemConfig& o) const {
  auto wdm_eq = [](const WdmSpec& a, const WdmSpec& b) {
    return a.n_channels == b.n_channels && a.symbol_rate_hz == b.symbol_rate_hz &&
           a.channel_spacing_hz == b.channel_spacing_hz && a.rolloff == b.rolloff &&
           a.centre_wavelength_m == b.centre_wavelength_m && a.format == b.format &&
           a.n_symbols == b.n_symbols && a.sim_oversampling == b.sim_oversampling;
  };
  auto fiber_eq = [](const FiberSpec& a, const FiberSpec& b) {
    return a.alpha_db_per_km == b.alpha_db_per_km &&
           a.dispersion_ps_nm_km == b.dispersion_ps_nm_km &&
           a.gamma_per_w_km == b.gamma_per_w_km && a.manakov_factor == b.manakov_factor &&
           a.span_length_km == b.span_length_km && a.steps_per_span == b.steps_per_span &&
           a.step_rule == b.step_rule;
  };
  auto dbp_eq = [](const std::optional<DbpSpec>& a, const std::optional<DbpSpec>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return a->bandwidth_hz == b->bandwidth_hz && a->steps_per_span == b->steps_per_span &&
           a->filter_shape == b->filter_shape &&
           a->power_normalization == b->power_normalization &&
           a->launch_power_dbm == b->launch_power_dbm;
  };
  return wdm_eq(wdm, o.wdm) && fiber_eq(link.fiber, o.link.fiber) &&
         link.n_spans == o.link.n_spans && link.noise_figure_db == o.link.noise_figure_db &&
         link.noiseless == o.link.noiseless && dbp_eq(dbp, o.dbp) &&
         launch_power_dbm == o.launch_power_dbm && master_seed == o.master_seed &&
         scale_preset == o.scale_preset &&
         mrnsps.snr_tolerance_db == o.mrnsps.snr_tolerance_db &&
         mrnsps.air_tolerance_frac == o.mrnsps.air_tolerance_frac;
}

SystemConfig paper_preset() {
  SystemConfig cfg;
  cfg.scale_preset = ScalePreset::paper;
  cfg.wdm.n_channels = 9;
  cfg.wdm.symbol_rate_hz = 32e9;
  cfg.wdm.channel_spacing_hz = 32e9;
  cfg.wdm.rolloff = 0.001;  // 0.1 %
  cfg.wdm.centre_wavelength_m = 1550e-9;
  cfg.wdm.format = ModFormat::qpsk;
  cfg.wdm.n_symbols = std::size_t(1) << 18;
  cfg.wdm.sim_oversampling = 18;  // 2 x n_channels -> 576 GSa/s
  cfg.link.fiber.alpha_db_per_km = 0.2;
  cfg.link.fiber.dispersion_ps_nm_km = 17.0;
  cfg.link.fiber.gamma_per_w_km = 1.2;
  cfg.link.fiber.manakov_factor = 8.0 / 9.0;
  cfg.link.fiber.span_length_km = 80.0;
  cfg.link.fiber.steps_per_span = 800;
  cfg.link.fiber.step_rule = StepRule::logarithmic;
  cfg.link.n_spans = 25;
  cfg.link.noise_figure_db = 4.5;
  cfg.launch_power_dbm = 0.0;
  cfg.master_seed = 1;
  return cfg;
}

SystemConfig desk_preset() {
  SystemConfig cfg;
  cfg.scale_preset = ScalePreset::desk;
  cfg.wdm.n_channels = 3;
  cfg.wdm.symbol_rate_hz = 32e9;
  cfg.wdm.channel_spacing_hz = 32e9;
  cfg.wdm.rolloff = 0.001;
  cfg.wdm.centre_wavelength_m = 1550e-9;
  cfg.wdm.format = ModFormat::qpsk;
  cfg.wdm.n_symbols = std::size_t(1) << 13;
  // 8 > 2 x n_channels keeps the frame length a power of two (2^16 samples).
  cfg.wdm.sim_oversampling = 8;
  cfg.link.fiber.alpha_db_per_km = 0.2;
  cfg.link.fiber.dispersion_ps_nm_km = 17.0;
  cfg.link.fiber.gamma_per_w_km = 1.2;
  cfg.link.fiber.manakov_factor = 8.0 / 9.0;
  cfg.link.fiber.span_length_km = 80.0;
  cfg.link.fiber.steps_per_span = 200;
  cfg.link.fiber.step_rule = StepRule::logarithmic;
  cfg.link.n_spans = 10;
  cfg.link.noise_figure_db = 4.5;
  cfg.launch_power_dbm = 0.0;
  cfg.master_seed = 1;
  return cfg;
}

double beta2_from_dispersion(double dispersion_ps_nm_km, double wavelength_m) {
  if (wavelength_m <= 0.0) throw ConfigError("beta2_from_dispersion: wavelength must be positive");
  // D [ps/nm/km] = 1e-6 s/m^2; result in s^2/m converted to ps^2/km (1e27).
  const double d_si = dispersion_ps_nm_km * 1e-6;
  const double beta2_si = -d_si * wavelength_m * wavelength_m /
                          (2.0 * M_PI * kPhysics.c);
  return beta2_si * 1e27;
}

double span_gain_db(const FiberSpec& fiber) {
  return fiber.alpha_db_per_km * fiber.span_length_km;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
  return v;
}

std::uint64_t parse_uint64(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("key '" + key + "': expected an unsigned integer, got '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + value + "'");
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

DbpSpec& require_dbp(SystemConfig& cfg, const std::string& key) {
  if (!cfg.dbp)
    throw ConfigError("key '" + key + "' requires compensation = dbp");
  return *cfg.dbp;
}

struct KeyDesc {
  const char* name;
  bool required;  // only enforced when no preset is given
  std::function<void(SystemConfig&, const std::string&)> apply;
  std::function<std::optional<std::string>(const SystemConfig&)> render;
};

// One table drives load_config, serialize_config and --set overrides.
// Order matters: 'compensation' precedes the dbp.* keys so that documents are
// order-insensitive.
const std::vector<KeyDesc>& key_table() {
  static const std::vector<KeyDesc> table = {
      {"compensation", false,
       [](SystemConfig& c, const std::string& v) {
         if (v == "edc") {
           c.dbp.reset();
         } else if (v == "dbp") {
           if (!c.dbp) {
             DbpSpec d;
             d.bandwidth_hz = c.wdm.aggregate_bandwidth_hz();  // full field
             d.steps_per_span = c.link.fiber.steps_per_span;
             c.dbp = d;
           }
         } else {
           throw ConfigError("key 'compensation': expected edc or dbp, got '" + v + "'");
         }
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return c.dbp ? "dbp" : "edc";
       }},
      {"wdm.n_channels", true,
       [](SystemConfig& c, const std::string& v) {
         c.wdm.n_channels = static_cast<int>(parse_int("wdm.n_channels", v));
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return std::to_string(c.wdm.n_channels);
       }},
      {"wdm.symbol_rate_hz", true,
       [](SystemConfig& c, const std::string& v) {
         c.wdm.symbol_rate_hz = parse_double("wdm.symbol_rate_hz", v);
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return fmt_double(c.wdm.symbol_rate_hz);
       }},
      {"wdm.channel_spacing_hz", true,
       [](SystemConfig& c, const std::string& v) {
         c.wdm.channel_spacing_hz = parse_double("wdm.channel_spacing_hz", v);
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return fmt_double(c.wdm.channel_spacing_hz);
       }},
      {"wdm.rolloff", true,
       [](SystemConfig& c, const std::string& v) { c.wdm.rolloff = parse_double("wdm.rolloff", v); },
       [](const SystemConfig& c) -> std::optional<std::string> { return fmt_double(c.wdm.rolloff); }},
      {"wdm.centre_wavelength_m", true,
       [](SystemConfig& c, const std::string& v) {
         c.wdm.centre_wavelength_m = parse_double("wdm.centre_wavelength_m", v);
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return fmt_double(c.wdm.centre_wavelength_m);
       }},
      {"wdm.format", true,
       [](SystemConfig& c, const std::string& v) {
         auto f = parse_format(v);
         if (!f)
           throw ConfigError("key 'wdm.format': unsupported format '" + v +
                             "' (supported: qpsk, 16qam, 64qam, 256qam)");
         c.wdm.format = *f;
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return std::string(format_name(c.wdm.format));
       }},
      {"wdm.n_symbols", true,
       [](SystemConfig& c, const std::string& v) {
         c.wdm.n_symbols = static_cast<std::size_t>(parse_int("wdm.n_symbols", v));
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return std::to_string(c.wdm.n_symbols);
       }},
      {"wdm.sim_oversampling", false,
       [](SystemConfig& c, const std::string& v) {
         c.wdm.sim_oversampling = static_cast<int>(parse_int("wdm.sim_oversampling", v));
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return std::to_string(c.wdm.sim_oversampling);
       }},
      {"fiber.alpha_db_per_km", true,
       [](SystemConfig& c, const std::string& v) {
         c.link.fiber.alpha_db_per_km = parse_double("fiber.alpha_db_per_km", v);
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return fmt_double(c.link.fiber.alpha_db_per_km);
       }},
      {"fiber.dispersion_ps_nm_km", true,
       [](SystemConfig& c, const std::string& v) {
         c.link.fiber.dispersion_ps_nm_km = parse_double("fiber.dispersion_ps_nm_km", v);
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return fmt_double(c.link.fiber.dispersion_ps_nm_km);
       }},
      {"fiber.gamma_per_w_km", true,
       [](SystemConfig& c, const std::string& v) {
         c.link.fiber.gamma_per_w_km = parse_double("fiber.gamma_per_w_km", v);
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return fmt_double(c.link.fiber.gamma_per_w_km);
       }},
      {"fiber.manakov_factor", false,
       [](SystemConfig& c, const std::string& v) {
         c.link.fiber.manakov_factor = parse_double("fiber.manakov_factor", v);
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return fmt_double(c.link.fiber.manakov_factor);
       }},
      {"fiber.span_length_km", true,
       [](SystemConfig& c, const std::string& v) {
         c.link.fiber.span_length_km = parse_double("fiber.span_length_km", v);
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return fmt_double(c.link.fiber.span_length_km);
       }},
      {"fiber.steps_per_span", true,
       [](SystemConfig& c, const std::string& v) {
         c.link.fiber.steps_per_span = static_cast<int>(parse_int("fiber.steps_per_span", v));
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return std::to_string(c.link.fiber.steps_per_span);
       }},
      {"fiber.step_rule", false,
       [](SystemConfig& c, const std::string& v) {
         if (v == "logarithmic")
           c.link.fiber.step_rule = StepRule::logarithmic;
         else if (v == "uniform")
           c.link.fiber.step_rule = StepRule::uniform;
         else
           throw ConfigError("key 'fiber.step_rule': expected logarithmic or uniform, got '" + v +
                             "'");
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return c.link.fiber.step_rule == StepRule::logarithmic ? "logarithmic" : "uniform";
       }},
      {"link.n_spans", true,
       [](SystemConfig& c, const std::string& v) {
         c.link.n_spans = static_cast<int>(parse_int("link.n_spans", v));
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return std::to_string(c.link.n_spans);
       }},
      {"link.noise_figure_db", true,
       [](SystemConfig& c, const std::string& v) {
         c.link.noise_figure_db = parse_double("link.noise_figure_db", v);
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return fmt_double(c.link.noise_figure_db);
       }},
      {"link.noiseless", false,
       [](SystemConfig& c, const std::string& v) { c.link.noiseless = parse_bool("link.noiseless", v); },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return c.link.noiseless ? "true" : "false";
       }},
      {"dbp.bandwidth_hz", false,
       [](SystemConfig& c, const std::string& v) {
         require_dbp(c, "dbp.bandwidth_hz").bandwidth_hz = parse_double("dbp.bandwidth_hz", v);
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         if (!c.dbp) return std::nullopt;
         return fmt_double(c.dbp->bandwidth_hz);
       }},
      {"dbp.steps_per_span", false,
       [](SystemConfig& c, const std::string& v) {
         require_dbp(c, "dbp.steps_per_span").steps_per_span =
             static_cast<int>(parse_int("dbp.steps_per_span", v));
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         if (!c.dbp) return std::nullopt;
         return std::to_string(c.dbp->steps_per_span);
       }},
      {"dbp.filter_shape", false,
       [](SystemConfig& c, const std::string& v) {
         auto& d = require_dbp(c, "dbp.filter_shape");
         if (v == "rrc_aggregate")
           d.filter_shape = SelectionShape::rrc_aggregate;
         else if (v == "ideal_brickwall")
           d.filter_shape = SelectionShape::ideal_brickwall;
         else
           throw ConfigError(
               "key 'dbp.filter_shape': expected rrc_aggregate or ideal_brickwall, got '" + v + "'");
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         if (!c.dbp) return std::nullopt;
         return c.dbp->filter_shape == SelectionShape::rrc_aggregate ? "rrc_aggregate"
                                                                     : "ideal_brickwall";
       }},
      {"dbp.power_normalization", false,
       [](SystemConfig& c, const std::string& v) {
         auto& d = require_dbp(c, "dbp.power_normalization");
         if (v == "total_band")
           d.power_normalization = DbpNormalization::total_band;
         else if (v == "center_channel")
           d.power_normalization = DbpNormalization::center_channel;
         else
           throw ConfigError(
               "key 'dbp.power_normalization': expected total_band or center_channel, got '" + v +
               "'");
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         if (!c.dbp) return std::nullopt;
         return c.dbp->power_normalization == DbpNormalization::total_band ? "total_band"
                                                                           : "center_channel";
       }},
      {"launch_power_dbm", true,
       [](SystemConfig& c, const std::string& v) {
         c.launch_power_dbm = parse_double("launch_power_dbm", v);
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return fmt_double(c.launch_power_dbm);
       }},
      {"master_seed", true,
       [](SystemConfig& c, const std::string& v) { c.master_seed = parse_uint64("master_seed", v); },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return std::to_string(c.master_seed);
       }},
      {"mrnsps.snr_tolerance_db", false,
       [](SystemConfig& c, const std::string& v) {
         c.mrnsps.snr_tolerance_db = parse_double("mrnsps.snr_tolerance_db", v);
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return fmt_double(c.mrnsps.snr_tolerance_db);
       }},
      {"mrnsps.air_tolerance_frac", false,
       [](SystemConfig& c, const std::string& v) {
         c.mrnsps.air_tolerance_frac = parse_double("mrnsps.air_tolerance_frac", v);
       },
       [](const SystemConfig& c) -> std::optional<std::string> {
         return fmt_double(c.mrnsps.air_tolerance_frac);
       }},
  };
  return table;
}

struct KvEntry {
  std::string value;
  int line;
};

std::map<std::string, KvEntry> parse_kv(const std::string& text) {
  std::map<std::string, KvEntry> doc;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" +
                        trim(raw) + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (auto [it, inserted] = doc.emplace(key, KvEntry{value, line_no}); !inserted)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key +
                        "' (first defined on line " + std::to_string(it->second.line) + ")");
  }
  return doc;
}

bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

}  // namespace

void apply_key(SystemConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& desc : key_table()) {
    if (key == desc.name) {
      desc.apply(cfg, value);
      if (cfg.dbp) cfg.dbp->launch_power_dbm = cfg.launch_power_dbm;
      return;
    }
  }
  throw ConfigError("unknown configuration key: " + key);
}

SystemConfig load_config(const std::string& text) {
  auto doc = parse_kv(text);

  SystemConfig cfg;
  bool have_preset = false;
  if (auto it = doc.find("preset"); it != doc.end()) {
    if (it->second.value == "paper")
      cfg = paper_preset();
    else if (it->second.value == "desk")
      cfg = desk_preset();
    else
      throw ConfigError("line " + std::to_string(it->second.line) +
                        ": key 'preset': expected paper or desk, got '" + it->second.value + "'");
    have_preset = true;
    doc.erase(it);
  }

  // Reject unknown keys up front, listing all offenders.
  std::string unknown;
  for (const auto& [key, entry] : doc) {
    bool known = false;
    for (const auto& desc : key_table())
      if (key == desc.name) { known = true; break; }
    if (!known) {
      if (!unknown.empty()) unknown += ", ";
      unknown += key;
    }
  }
  if (!unknown.empty()) throw ConfigError("unknown configuration keys: " + unknown);

  // Apply in table order so 'compensation' precedes dbp.* regardless of the
  // order in the document.
  for (const auto& desc : key_table()) {
    auto it = doc.find(desc.name);
    if (it == doc.end()) {
      if (!have_preset && desc.required)
        throw ConfigError(std::string("missing required key: ") + desc.name);
      continue;
    }
    try {
      desc.apply(cfg, it->second.value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(it->second.line) + ": " + e.what());
    }
  }

  if (cfg.wdm.sim_oversampling == 0) cfg.wdm.sim_oversampling = 2 * cfg.wdm.n_channels;
  if (cfg.dbp) cfg.dbp->launch_power_dbm = cfg.launch_power_dbm;

  validate(cfg);
  return cfg;
}

SystemConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str());
}

std::string serialize_config(const SystemConfig& cfg) {
  std::ostringstream out;
  if (cfg.scale_preset == ScalePreset::desk) out << "preset = desk\n";
  if (cfg.scale_preset == ScalePreset::paper) out << "preset = paper\n";
  for (const auto& desc : key_table()) {
    if (auto v = desc.render(cfg)) out << desc.name << " = " << *v << "\n";
  }
  return out.str();
}

void apply_environment_overrides(SystemConfig& cfg) {
  if (const char* seed = std::getenv("MCDBP_MASTER_SEED")) {
    cfg.master_seed = parse_uint64("MCDBP_MASTER_SEED", seed);
  }
}

void validate(const SystemConfig& cfg) {
  const WdmSpec& w = cfg.wdm;
  if (w.n_channels < 1 || w.n_channels % 2 == 0)
    throw ConfigError("wdm.n_channels must be an odd positive count (a central channel must exist)");
  if (w.symbol_rate_hz <= 0) throw ConfigError("wdm.symbol_rate_hz must be positive");
  if (w.channel_spacing_hz < w.symbol_rate_hz)
    throw ConfigError("wdm.channel_spacing_hz must be at least the symbol rate (Nyquist spacing)");
  if (!(w.rolloff > 0.0 && w.rolloff < 1.0))
    throw ConfigError("wdm.rolloff must lie in (0, 1)");
  if (w.centre_wavelength_m <= 0) throw ConfigError("wdm.centre_wavelength_m must be positive");
  if (w.n_symbols < 2 || !is_power_of_two(w.n_symbols))
    throw ConfigError("wdm.n_symbols must be a power of two (>= 2)");
  if (w.sim_oversampling < 1) throw ConfigError("wdm.sim_oversampling must be a positive integer");
  const double occupied =
      (w.n_channels - 1) * w.channel_spacing_hz + (1.0 + w.rolloff) * w.symbol_rate_hz;
  if (w.sample_rate_hz() < occupied)
    throw ConfigError("wdm.sim_oversampling too small: sample rate " +
                      std::to_string(w.sample_rate_hz() / 1e9) + " GSa/s does not cover the " +
                      std::to_string(occupied / 1e9) + " GHz WDM spectrum");

  const FiberSpec& f = cfg.link.fiber;
  if (f.alpha_db_per_km <= 0) throw ConfigError("fiber.alpha_db_per_km must be positive");
  if (f.gamma_per_w_km < 0) throw ConfigError("fiber.gamma_per_w_km must be non-negative");
  if (!(f.manakov_factor > 0.0 && f.manakov_factor <= 1.0))
    throw ConfigError("fiber.manakov_factor must lie in (0, 1]");
  if (f.span_length_km < 0) throw ConfigError("fiber.span_length_km must be non-negative");
  if (f.steps_per_span < 1) throw ConfigError("fiber.steps_per_span must be >= 1");

  if (cfg.link.n_spans < 1) throw ConfigError("link.n_spans must be >= 1");
  if (cfg.link.noise_figure_db <= 0) throw ConfigError("link.noise_figure_db must be positive");

  if (cfg.dbp) {
    const DbpSpec& d = *cfg.dbp;
    if (d.steps_per_span < 1) throw ConfigError("dbp.steps_per_span must be >= 1");
    if (d.bandwidth_hz > w.aggregate_bandwidth_hz() * (1.0 + 1e-9))
      throw ConfigError("dbp.bandwidth_hz exceeds the aggregate WDM bandwidth");
    const double k = d.bandwidth_hz / w.channel_spacing_hz;
    const long k_round = std::lround(k);
    if (std::abs(k - k_round) > 1e-6 || k_round < 1 || k_round % 2 == 0 ||
        k_round > w.n_channels)
      throw ConfigError(
          "dbp.bandwidth_hz must be an odd multiple k of the channel spacing with k <= "
          "wdm.n_channels (k-channel back-propagation)");
  }

  if (cfg.mrnsps.snr_tolerance_db < 0) throw ConfigError("mrnsps.snr_tolerance_db must be >= 0");
  if (cfg.mrnsps.air_tolerance_frac < 0) throw ConfigError("mrnsps.air_tolerance_frac must be >= 0");
}

std::vector<std::string> validation_warnings(const SystemConfig& cfg) {
  std::vector<std::string> warnings;
  if (cfg.link.noise_figure_db < 3.0)
    warnings.push_back("link.noise_figure_db below the 3 dB quantum limit");
  const double guard = cfg.wdm.symbol_rate_hz * (1.0 + cfg.wdm.rolloff);
  if (cfg.wdm.channel_spacing_hz < guard)
    warnings.push_back(
        "wdm.channel_spacing_hz below symbol_rate*(1+rolloff): adjacent RRC skirts overlap "
        "(exact-Nyquist superchannel); expect a residual adjacent-channel crosstalk floor");
  return warnings;
}

}  // namespace mcdbp
