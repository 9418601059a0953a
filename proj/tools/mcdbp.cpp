// mcdbp: split-step simulator and DSP toolkit for Nyquist-spaced WDM coherent
// transmission with multi-channel digital back-propagation.
//
// Subcommands: simulate | sweep-power | optimize-steps | report.
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.

#include <CLI11.hpp>

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "mcdbp/channel.hpp"
#include "mcdbp/experiments.hpp"
#include "mcdbp/sigproc.hpp"
#include "mcdbp/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace mcdbp;

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_dir = ".";
  int workers = 0;
  bool no_timing = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool needs_config = true) {
  auto* c = cmd->add_option("-c,--config", opt.config_path, "configuration file (key = value)");
  if (needs_config) c->required();
  cmd->add_option("--set", opt.overrides,
                  "dotted-key override applied after file load, e.g. --set launch_power_dbm=-2");
  cmd->add_option("-o,--output-dir", opt.output_dir, "directory for result artifacts");
  cmd->add_option("--workers", opt.workers,
                  "worker threads for sweep points (default: available cores)");
  cmd->add_flag("--no-timing", opt.no_timing,
                "zero the wallclock_s column so reruns are byte-identical");
}

SystemConfig load_with_overrides(const CommonOptions& opt) {
  SystemConfig cfg = load_config_file(opt.config_path);
  apply_environment_overrides(cfg);
  for (const auto& kv : opt.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    std::string key = kv.substr(0, eq);
    std::string value = kv.substr(eq + 1);
    auto strip = [](std::string& s) {
      while (!s.empty() && (s.front() == ' ')) s.erase(s.begin());
      while (!s.empty() && (s.back() == ' ')) s.pop_back();
    };
    strip(key);
    strip(value);
    apply_key(cfg, key, value);
  }
  validate(cfg);
  for (const auto& w : validation_warnings(cfg)) std::cerr << "warning: " << w << "\n";
  return cfg;
}

void write_effective_config(const SystemConfig& cfg, const CommonOptions& opt,
                            std::vector<std::string>& artifacts) {
  const fs::path path = fs::path(opt.output_dir) / "effective_config.txt";
  std::ofstream out(path);
  out << "# effective configuration (file + environment + --set overrides)\n";
  for (const auto& kv : opt.overrides) out << "# override: " << kv << "\n";
  out << serialize_config(cfg);
  artifacts.push_back(path.string());
}

void print_artifacts(const std::vector<std::string>& artifacts) {
  for (const auto& a : artifacts) std::cout << "wrote " << a << "\n";
}

struct CompensationChoice {
  std::string label;
  std::optional<DbpSpec> dbp;  // nullopt = EDC
};

std::vector<CompensationChoice> parse_compensation_list(const std::string& list,
                                                        const SystemConfig& cfg) {
  std::vector<CompensationChoice> choices;
  std::stringstream ss(list);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    if (token == "edc") {
      choices.push_back({"EDC", std::nullopt});
      continue;
    }
    if (token.rfind("dbp:", 0) != 0)
      throw ConfigError("compensation token must be 'edc', 'dbp:<k>' or 'dbp:full': " + token);
    const std::string arg = token.substr(4);
    int k;
    if (arg == "full") {
      k = cfg.wdm.n_channels;
    } else {
      try {
        k = std::stoi(arg);
      } catch (...) {
        throw ConfigError("bad channel count in compensation token: " + token);
      }
    }
    DbpSpec spec;
    if (cfg.dbp) spec = *cfg.dbp;
    spec.bandwidth_hz = k * cfg.wdm.channel_spacing_hz;
    if (!cfg.dbp) spec.steps_per_span = cfg.link.fiber.steps_per_span;
    spec.launch_power_dbm = cfg.launch_power_dbm;
    choices.push_back({"DBP-" + std::to_string(k) + "ch", spec});
  }
  if (choices.empty()) throw ConfigError("empty compensation list");
  return choices;
}

std::string slugify(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? char(std::tolower(c)) : '_');
  return out;
}

int cmd_simulate(const CommonOptions& opt, const std::string& dump_field_path,
                 const std::string& dump_spectrum_path) {
  SystemConfig cfg = load_with_overrides(opt);
  fs::create_directories(opt.output_dir);
  std::vector<std::string> artifacts;
  write_effective_config(cfg, opt, artifacts);

  SweepPoint pt;
  pt.format = cfg.wdm.format;
  pt.power_dbm = cfg.launch_power_dbm;
  pt.dbp_bandwidth_hz = cfg.dbp ? cfg.dbp->bandwidth_hz : 0.0;
  pt.dbp_steps_per_span = cfg.dbp ? cfg.dbp->steps_per_span : 0;
  pt.seed = cfg.master_seed;
  const auto start = std::chrono::steady_clock::now();
  pt.report = run_single_point(cfg);
  pt.wallclock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::printf("format          : %s\n", format_name(pt.format));
  std::printf("launch power    : %.2f dBm per channel\n", pt.power_dbm);
  std::printf("compensation    : %s\n",
              pt.is_edc() ? "EDC"
                          : ("DBP " + std::to_string(pt.dbp_steps_per_span) + " steps/span, " +
                             std::to_string(pt.dbp_bandwidth_hz / 1e9) + " GHz")
                                .c_str());
  std::printf("SNR             : %.3f dB\n", pt.report.snr_db);
  std::printf("MI              : %.4f bits/2D-symbol\n", pt.report.mi_bits_per_2d);
  std::printf("AIR per channel : %.1f Gbit/s\n", pt.report.air_per_channel_bps / 1e9);
  std::printf("AIR total       : %.4f Tbit/s\n", pt.report.air_total_bps / 1e12);
  std::printf("symbols scored  : %zu\n", pt.report.n_symbols_used);

  const fs::path csv = fs::path(opt.output_dir) / "simulate.csv";
  write_results_csv({pt}, csv.string(), !opt.no_timing);
  artifacts.push_back(csv.string());
  const fs::path metrics_txt = fs::path(opt.output_dir) / "metrics.txt";
  std::ofstream(metrics_txt) << pt.report.to_text();
  artifacts.push_back(metrics_txt.string());

  if (!dump_field_path.empty() || !dump_spectrum_path.empty()) {
    // Re-run the receive side to expose the compensated field for dumping.
    // (Kept out of the hot path; debugging aid only.)
    const RrcSpec rrc{1.0 / cfg.wdm.symbol_rate_hz, cfg.wdm.rolloff};
    std::vector<SampledField> fields;
    std::vector<SymbolFrame> frames;
    const Constellation constellation = build_constellation(cfg.wdm.format);
    for (int ch = 0; ch < cfg.wdm.n_channels; ++ch) {
      frames.push_back(decorrelate_polarizations(
          generate_frame(ch, constellation, cfg.wdm.n_symbols, cfg.master_seed)));
      fields.push_back(shape_channel(frames.back(), rrc, cfg.wdm.sample_rate_hz()));
    }
    SampledField tx = multiplex(fields, cfg.wdm.channel_spacing_hz);
    tx = set_launch_power(tx, cfg.launch_power_dbm, cfg.wdm.n_channels);
    SampledField rx =
        propagate_link(std::move(tx), cfg.link, cfg.wdm.centre_wavelength_m, cfg.master_seed);
    if (!dump_field_path.empty()) {
      dump_field(rx, dump_field_path);
      artifacts.push_back(dump_field_path);
    }
    if (!dump_spectrum_path.empty()) {
      export_spectrum_csv(rx, dump_spectrum_path);
      artifacts.push_back(dump_spectrum_path);
    }
  }
  print_artifacts(artifacts);
  return 0;
}

int cmd_sweep_power(const CommonOptions& opt, const std::string& power_range,
                    const std::string& compensation_list) {
  SystemConfig cfg = load_with_overrides(opt);
  const std::vector<double> powers = parse_power_range(power_range);
  const auto choices = parse_compensation_list(compensation_list, cfg);
  fs::create_directories(opt.output_dir);

  if (cfg.scale_preset == ScalePreset::paper)
    std::cerr << "warning: paper-scale sweep requested (" << powers.size() * choices.size()
              << " points at 2^18 symbols, 800 steps/span); expect hours of compute\n";

  std::vector<std::string> artifacts;
  write_effective_config(cfg, opt, artifacts);

  std::vector<SweepPoint> all_points;
  bool any_error = false;
  for (const auto& choice : choices) {
    SystemConfig run = cfg;
    run.dbp = choice.dbp;
    validate(run);
    std::cout << "sweeping " << choice.label << " over " << powers.size() << " powers...\n";
    const auto points = power_sweep(run, powers, opt.workers);
    for (const auto& pt : points) {
      if (!pt.ok()) {
        any_error = true;
        std::cerr << "error: " << choice.label << " @ " << pt.power_dbm << " dBm: " << pt.error
                  << "\n";
      }
    }

    PlotSeries snr_series{choice.label, {}};
    const fs::path snr_csv =
        fs::path(opt.output_dir) / ("curve_" + slugify(choice.label) + "_snr.csv");
    const fs::path air_csv =
        fs::path(opt.output_dir) / ("curve_" + slugify(choice.label) + "_air.csv");
    std::ofstream snr_out(snr_csv);
    std::ofstream air_out(air_csv);
    snr_out << "power_dbm,snr_db\n";
    air_out << "power_dbm,air_tbps\n";
    char buf[96];
    for (const auto& pt : points) {
      if (!pt.ok()) continue;
      std::snprintf(buf, sizeof buf, "%g,%.6f\n", pt.power_dbm, pt.report.snr_db);
      snr_out << buf;
      std::snprintf(buf, sizeof buf, "%g,%.6f\n", pt.power_dbm, pt.report.air_total_bps / 1e12);
      air_out << buf;
    }
    artifacts.push_back(snr_csv.string());
    artifacts.push_back(air_csv.string());
    all_points.insert(all_points.end(), points.begin(), points.end());
  }

  const fs::path results = fs::path(opt.output_dir) / "results.csv";
  write_results_csv(all_points, results.string(), !opt.no_timing);
  artifacts.push_back(results.string());
  print_artifacts(artifacts);
  return any_error ? 1 : 0;
}

int cmd_optimize_steps(const CommonOptions& opt, const std::string& criteria_list,
                       const std::string& bandwidth_channels, const std::string& format_list,
                       const std::string& ladder_list, const std::string& power_range) {
  SystemConfig cfg = load_with_overrides(opt);
  fs::create_directories(opt.output_dir);
  std::vector<std::string> artifacts;
  write_effective_config(cfg, opt, artifacts);

  std::vector<Criterion> criteria;
  {
    std::stringstream ss(criteria_list);
    std::string token;
    while (std::getline(ss, token, ',')) {
      auto c = parse_criterion(token);
      if (!c) throw ConfigError("criterion must be snr or air: " + token);
      criteria.push_back(*c);
    }
  }
  std::vector<int> k_list;
  {
    std::stringstream ss(bandwidth_channels);
    std::string token;
    while (std::getline(ss, token, ',')) k_list.push_back(std::stoi(token));
  }
  std::vector<ModFormat> formats;
  {
    std::stringstream ss(format_list);
    std::string token;
    while (std::getline(ss, token, ',')) {
      auto f = parse_format(token);
      if (!f) throw ConfigError("unknown format: " + token);
      formats.push_back(*f);
    }
  }
  std::vector<int> ladder;
  if (ladder_list.empty()) {
    ladder = default_step_ladder(cfg);
  } else {
    std::stringstream ss(ladder_list);
    std::string token;
    while (std::getline(ss, token, ',')) ladder.push_back(std::stoi(token));
  }
  const std::vector<double> powers = parse_power_range(power_range);

  if (cfg.scale_preset == ScalePreset::paper)
    std::cerr << "warning: paper-scale step optimisation requested; expect many hours of compute\n";

  std::vector<MrnspsResult> results;
  for (Criterion crit : criteria) {
    for (ModFormat fmt : formats) {
      for (int k : k_list) {
        const double bw = k * cfg.wdm.channel_spacing_hz;
        std::cout << "MRNSPS " << criterion_name(crit) << " " << format_name(fmt) << " "
                  << bw / 1e9 << " GHz...\n";
        results.push_back(
            mrnsps_search(cfg, bw, fmt, crit, ladder, -1.0, powers, opt.workers));
        const auto& r = results.back();
        std::cout << "  -> " << r.chosen_steps << " steps/span"
                  << (r.saturated ? " (saturated at reference)" : "") << "\n";
      }
    }
  }

  const fs::path summary = fs::path(opt.output_dir) / "mrnsps_summary.csv";
  const fs::path detail = fs::path(opt.output_dir) / "mrnsps_detail.csv";
  write_mrnsps_summary_csv(results, summary.string());
  write_mrnsps_detail_csv(results, detail.string());
  artifacts.push_back(summary.string());
  artifacts.push_back(detail.string());
  print_artifacts(artifacts);
  return 0;
}

int cmd_report(const std::string& results_path, const std::string& output_dir) {
  const auto points = load_results_csv(results_path);
  if (points.empty()) {
    std::cout << "no data in " << results_path << "\n";
    return 0;
  }
  fs::create_directories(output_dir);

  // Group points into curves by (format, compensation).
  std::map<std::string, std::vector<const SweepPoint*>> curves;
  for (const auto& pt : points) {
    std::string label = std::string(format_name(pt.format)) + " ";
    if (pt.is_edc()) {
      label += "EDC";
    } else {
      char buf[48];
      std::snprintf(buf, sizeof buf, "DBP %ggHz/%d", pt.dbp_bandwidth_hz / 1e9,
                    pt.dbp_steps_per_span);
      label += buf;
    }
    curves[label].push_back(&pt);
  }

  std::printf("%-28s %7s %9s %9s %9s\n", "curve", "points", "peakSNR", "@dBm", "peakAIR");
  std::vector<PlotSeries> snr_series, air_series;
  for (auto& [label, pts] : curves) {
    std::sort(pts.begin(), pts.end(),
              [](const SweepPoint* a, const SweepPoint* b) { return a->power_dbm < b->power_dbm; });
    PlotSeries snr{label, {}}, air{label, {}};
    const SweepPoint* best = pts.front();
    for (const auto* pt : pts) {
      snr.xy.emplace_back(pt->power_dbm, pt->report.snr_db);
      air.xy.emplace_back(pt->power_dbm, pt->report.air_total_bps / 1e12);
      if (pt->report.snr_db > best->report.snr_db) best = pt;
    }
    double peak_air = 0.0;
    for (const auto* pt : pts) peak_air = std::max(peak_air, pt->report.air_total_bps / 1e12);
    std::printf("%-28s %7zu %8.2fdB %9.1f %8.3fT\n", label.c_str(), pts.size(),
                best->report.snr_db, best->power_dbm, peak_air);
    snr_series.push_back(std::move(snr));
    air_series.push_back(std::move(air));
  }

  const fs::path snr_svg = fs::path(output_dir) / "snr_vs_power.svg";
  const fs::path air_svg = fs::path(output_dir) / "air_vs_power.svg";
  write_svg_plot(snr_svg.string(), "SNR versus launch power", "launch power per channel (dBm)",
                 "SNR (dB)", snr_series);
  write_svg_plot(air_svg.string(), "AIR versus launch power", "launch power per channel (dBm)",
                 "AIR (Tbit/s)", air_series);
  print_artifacts({snr_svg.string(), air_svg.string()});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nyquist-spaced WDM split-step simulator with multi-channel DBP receiver DSP"};
  app.require_subcommand(1);

  CommonOptions sim_opt;
  std::string dump_field_path, dump_spectrum_path;
  auto* sim = app.add_subcommand("simulate", "run one transmit/propagate/compensate/score point");
  add_common(sim, sim_opt);
  sim->add_option("--dump-rx-field", dump_field_path, "write the received field (binary dump)");
  sim->add_option("--dump-spectrum", dump_spectrum_path, "write the received spectrum (CSV)");

  CommonOptions sweep_opt;
  std::string power_range = "-10:4:2";
  std::string compensation = "edc,dbp:full";
  auto* sweep = app.add_subcommand("sweep-power", "SNR/AIR versus launch power curves");
  add_common(sweep, sweep_opt);
  sweep->add_option("--powers", power_range, "launch power grid 'start:stop:step' in dBm");
  sweep->add_option("--compensation", compensation,
                    "comma list of edc | dbp:<k> | dbp:full (k = back-propagated channels)");

  CommonOptions opt_opt;
  std::string criteria = "snr,air";
  std::string bandwidths = "1";
  std::string formats = "qpsk";
  std::string ladder;
  std::string opt_powers = "-6:6:2";
  auto* optimize =
      app.add_subcommand("optimize-steps", "minimum required DBP steps per span search");
  add_common(optimize, opt_opt);
  optimize->add_option("--criterion", criteria, "snr, air or snr,air");
  optimize->add_option("--bandwidths", bandwidths,
                       "comma list of back-propagated channel counts (odd)");
  optimize->add_option("--formats", formats, "comma list of modulation formats");
  optimize->add_option("--ladder", ladder, "comma list of candidate steps per span");
  optimize->add_option("--powers", opt_powers, "launch power grid for the per-steps sweeps");

  std::string results_path;
  std::string report_out = ".";
  auto* report = app.add_subcommand("report", "summarise a results CSV and emit SVG plots");
  report->add_option("--results", results_path, "results CSV produced by sweep-power/simulate")
      ->required();
  report->add_option("-o,--output-dir", report_out, "directory for the plot files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_opt, dump_field_path, dump_spectrum_path);
    if (sweep->parsed()) return cmd_sweep_power(sweep_opt, power_range, compensation);
    if (optimize->parsed())
      return cmd_optimize_steps(opt_opt, criteria, bandwidths, formats, ladder, opt_powers);
    if (report->parsed()) return cmd_report(results_path, report_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
