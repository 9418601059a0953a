#include "mcdbp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "mcdbp/channel.hpp"
#include "mcdbp/equalizer.hpp"
#include "mcdbp/fft.hpp"
#include "mcdbp/sigproc.hpp"

namespace mcdbp {

MetricsReport run_single_point(const SystemConfig& cfg) {
  const WdmSpec& wdm = cfg.wdm;
  const Constellation constellation = build_constellation(wdm.format);
  const RrcSpec rrc{1.0 / wdm.symbol_rate_hz, wdm.rolloff};
  const double sample_rate = wdm.sample_rate_hz();

  // Channels are shifted onto the comb and accumulated one at a time (same
  // order and arithmetic as multiplex()) so only one per-channel field is
  // alive at once; at full scale the aggregate-rate fields are ~150 MB each.
  SymbolFrame centre_frame;
  SampledField tx;
  for (int ch = 0; ch < wdm.n_channels; ++ch) {
    SymbolFrame frame = decorrelate_polarizations(
        generate_frame(ch, constellation, wdm.n_symbols, cfg.master_seed));
    const SampledField shaped = shape_channel(frame, rrc, sample_rate);
    const SampledField shifted = frequency_shift(shaped, wdm.channel_offset_hz(ch));
    if (ch == 0) {
      tx.sample_rate_hz = shifted.sample_rate_hz;
      tx.centre_frequency_offset_hz = 0.0;
      tx.x_pol.assign(shifted.size(), cdouble{});
      tx.y_pol.assign(shifted.size(), cdouble{});
    }
    for (std::size_t k = 0; k < tx.size(); ++k) {
      tx.x_pol[k] += shifted.x_pol[k];
      tx.y_pol[k] += shifted.y_pol[k];
    }
    if (ch == wdm.centre_channel()) centre_frame = std::move(frame);
  }
  tx = set_launch_power(tx, cfg.launch_power_dbm, wdm.n_channels);

  SampledField rx =
      propagate_link(std::move(tx), cfg.link, wdm.centre_wavelength_m, cfg.master_seed);

  SampledField compensated;
  if (cfg.dbp) {
    DbpSpec spec = *cfg.dbp;
    spec.launch_power_dbm = cfg.launch_power_dbm;
    compensated = dbp(rx, spec, cfg.link, wdm);
  } else {
    compensated = edc(rx, cfg.link, wdm.centre_wavelength_m);
  }

  const ReceivedSymbols symbols = matched_filter_downsample(
      compensated, wdm.centre_channel(), rrc, wdm.n_channels, wdm.channel_spacing_hz);
  return score_metrics(centre_frame, symbols, constellation, wdm);
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const std::size_t n_workers =
      std::min<std::size_t>(n, workers > 0 ? std::size_t(workers) : std::size_t(hw));
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

const char* criterion_name(Criterion c) { return c == Criterion::snr ? "snr" : "air"; }

std::optional<Criterion> parse_criterion(const std::string& name) {
  if (name == "snr" || name == "SNR") return Criterion::snr;
  if (name == "air" || name == "AIR") return Criterion::air;
  return std::nullopt;
}

std::vector<SweepPoint> power_sweep(const SystemConfig& cfg, const std::vector<double>& powers_dbm,
                                    int workers) {
  std::vector<double> powers = powers_dbm;
  std::sort(powers.begin(), powers.end());

  // FFTW plan creation is serialised behind a lock but must not overlap plan
  // execution in other threads; creating the needed sizes up front keeps the
  // workers on the execute-only path.
  if (powers.size() > 1) {
    ComplexVec warm(cfg.wdm.n_symbols * std::size_t(std::max(1, cfg.wdm.sim_oversampling)));
    fft::forward(warm);
    warm.assign(cfg.wdm.n_symbols, cdouble{});
    fft::forward(warm);
  }

  std::vector<SweepPoint> points(powers.size());
  parallel_for(powers.size(), workers, [&](std::size_t i) {
    SweepPoint& pt = points[i];
    pt.format = cfg.wdm.format;
    pt.power_dbm = powers[i];
    pt.dbp_bandwidth_hz = cfg.dbp ? cfg.dbp->bandwidth_hz : 0.0;
    pt.dbp_steps_per_span = cfg.dbp ? cfg.dbp->steps_per_span : 0;
    pt.seed = cfg.master_seed;
    SystemConfig point_cfg = cfg;
    point_cfg.launch_power_dbm = powers[i];
    const auto start = std::chrono::steady_clock::now();
    try {
      pt.report = run_single_point(point_cfg);
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    pt.wallclock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return points;
}

OptimumResult find_optimum(const std::vector<SweepPoint>& points, Criterion criterion) {
  const SweepPoint* best = nullptr;
  for (const auto& pt : points) {
    if (!pt.ok()) continue;
    if (!best || pt.metric(criterion) > best->metric(criterion)) best = &pt;
  }
  if (!best) throw std::invalid_argument("find_optimum: no successful sweep points");

  double lo = best->power_dbm, hi = best->power_dbm;
  for (const auto& pt : points) {
    if (!pt.ok()) continue;
    lo = std::min(lo, pt.power_dbm);
    hi = std::max(hi, pt.power_dbm);
  }
  OptimumResult result;
  result.point = *best;
  result.on_boundary = (best->power_dbm == lo || best->power_dbm == hi) && lo != hi;
  return result;
}

std::vector<int> default_step_ladder(const SystemConfig& cfg) {
  std::set<int> ladder = {1, 2, 5, 10, 25, 50, 75, 100, 150, 200, 250, 500};
  ladder.insert(cfg.link.fiber.steps_per_span);
  return {ladder.begin(), ladder.end()};
}

MrnspsResult mrnsps_search(const SystemConfig& cfg, double bandwidth_hz, ModFormat format,
                           Criterion criterion, const std::vector<int>& ladder,
                           double tolerance, const std::vector<double>& powers_dbm,
                           int workers) {
  if (ladder.empty()) throw std::invalid_argument("mrnsps_search: empty step ladder");
  MrnspsResult result;
  result.format = format;
  result.bandwidth_hz = bandwidth_hz;
  result.criterion = criterion;
  result.ladder = ladder;
  std::sort(result.ladder.begin(), result.ladder.end());
  result.reference_steps = cfg.link.fiber.steps_per_span;

  if (tolerance < 0.0) {
    if (criterion == Criterion::snr) {
      tolerance = cfg.mrnsps.snr_tolerance_db;
    } else {
      const double ceiling = 2.0 * cfg.wdm.symbol_rate_hz * format_bits(format) *
                             cfg.wdm.n_channels;
      tolerance = cfg.mrnsps.air_tolerance_frac * ceiling;
    }
  }
  result.tolerance = tolerance;

  SystemConfig base = cfg;
  base.wdm.format = format;
  DbpSpec dbp_spec;
  dbp_spec.bandwidth_hz = bandwidth_hz;
  dbp_spec.steps_per_span = result.reference_steps;
  base.dbp = dbp_spec;
  validate(base);

  // One shared noise/data realisation across the whole ladder (same master
  // seed), so step-count comparisons are paired.
  auto peak_at_steps = [&](int steps) {
    SystemConfig run = base;
    run.dbp->steps_per_span = steps;
    const auto points = power_sweep(run, powers_dbm, workers);
    for (const auto& pt : points)
      if (!pt.ok())
        throw std::runtime_error("mrnsps_search: sweep point failed: " + pt.error);
    const auto opt = find_optimum(points, criterion);
    return std::pair<double, double>{opt.point.metric(criterion), opt.point.power_dbm};
  };

  const auto [ref_peak, ref_power] = peak_at_steps(result.reference_steps);
  result.reference_peak = ref_peak;

  result.ladder_peaks.resize(result.ladder.size());
  result.ladder_peak_powers.resize(result.ladder.size());
  result.chosen_steps = result.reference_steps;
  result.saturated = true;
  for (std::size_t i = 0; i < result.ladder.size(); ++i) {
    const int steps = result.ladder[i];
    if (steps == result.reference_steps) {
      result.ladder_peaks[i] = ref_peak;
      result.ladder_peak_powers[i] = ref_power;
    } else {
      std::tie(result.ladder_peaks[i], result.ladder_peak_powers[i]) = peak_at_steps(steps);
    }
    if (result.saturated && result.ladder_peaks[i] >= ref_peak - tolerance) {
      result.chosen_steps = steps;
      result.saturated = false;
      // Later entries are still evaluated: the full ladder is recorded.
    }
  }
  return result;
}

namespace {

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

const char* kResultsCsvHeader =
    "format,power_dbm,bandwidth_ghz,steps_per_span,snr_db,mi_bits,air_tbps,seed,wallclock_s";

void write_results_csv(const std::vector<SweepPoint>& points, const std::string& path,
                       bool include_timing) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open results file for writing: " + path);
  out << kResultsCsvHeader << "\n";
  for (const auto& pt : points) {
    if (!pt.ok()) continue;
    out << format_name(pt.format) << ',' << fmt_g17(pt.power_dbm) << ','
        << fmt_g17(pt.dbp_bandwidth_hz / 1e9) << ',' << pt.dbp_steps_per_span << ','
        << fmt_g17(pt.report.snr_db) << ',' << fmt_g17(pt.report.mi_bits_per_2d) << ','
        << fmt_g17(pt.report.air_total_bps / 1e12) << ',' << pt.seed << ','
        << fmt_g17(include_timing ? pt.wallclock_s : 0.0) << "\n";
  }
}

std::vector<SweepPoint> load_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open results file: " + path);
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty results file: " + path);
  if (!header.empty() && header.back() == '\r') header.pop_back();

  const auto expected = split_csv_line(kResultsCsvHeader);
  const auto got = split_csv_line(header);
  std::string unknown;
  for (const auto& col : got)
    if (std::find(expected.begin(), expected.end(), col) == expected.end())
      unknown += (unknown.empty() ? "" : ", ") + col;
  if (!unknown.empty())
    throw std::runtime_error("results file has unknown columns: " + unknown);
  if (got != expected)
    throw std::runtime_error("results file header does not match the documented column list");

  std::vector<SweepPoint> points;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != expected.size())
      throw std::runtime_error("results file line " + std::to_string(line_no) +
                               ": expected " + std::to_string(expected.size()) + " columns");
    SweepPoint pt;
    const auto fmt = parse_format(cells[0]);
    if (!fmt)
      throw std::runtime_error("results file line " + std::to_string(line_no) +
                               ": unknown format '" + cells[0] + "'");
    pt.format = *fmt;
    pt.power_dbm = std::stod(cells[1]);
    pt.dbp_bandwidth_hz = std::stod(cells[2]) * 1e9;
    pt.dbp_steps_per_span = std::stoi(cells[3]);
    pt.report.snr_db = std::stod(cells[4]);
    pt.report.mi_bits_per_2d = std::stod(cells[5]);
    pt.report.air_total_bps = std::stod(cells[6]) * 1e12;
    pt.seed = std::stoull(cells[7]);
    pt.wallclock_s = std::stod(cells[8]);
    points.push_back(pt);
  }
  return points;
}

void write_mrnsps_summary_csv(const std::vector<MrnspsResult>& results, const std::string& path) {
  std::set<double> bandwidths;
  for (const auto& r : results) bandwidths.insert(r.bandwidth_hz);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open MRNSPS summary file: " + path);
  out << "criterion,format";
  for (double bw : bandwidths) {
    char buf[32];
    std::snprintf(buf, sizeof buf, ",%gGHz", bw / 1e9);
    out << buf;
  }
  out << "\n";

  // Two blocks (AIR then SNR), formats in cardinality order, Table-shaped.
  for (Criterion crit : {Criterion::air, Criterion::snr}) {
    for (ModFormat fmt :
         {ModFormat::qpsk, ModFormat::qam16, ModFormat::qam64, ModFormat::qam256}) {
      std::map<double, const MrnspsResult*> row;
      for (const auto& r : results)
        if (r.criterion == crit && r.format == fmt) row[r.bandwidth_hz] = &r;
      if (row.empty()) continue;
      out << criterion_name(crit) << ',' << format_name(fmt);
      for (double bw : bandwidths) {
        auto it = row.find(bw);
        if (it == row.end())
          out << ',';
        else
          out << ',' << it->second->chosen_steps << (it->second->saturated ? "!" : "");
      }
      out << "\n";
    }
  }
}

void write_mrnsps_detail_csv(const std::vector<MrnspsResult>& results, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open MRNSPS detail file: " + path);
  out << "criterion,format,bandwidth_ghz,steps_per_span,peak_metric,peak_power_dbm,"
         "reference_steps,reference_peak,tolerance,chosen_steps,saturated\n";
  for (const auto& r : results) {
    for (std::size_t i = 0; i < r.ladder.size(); ++i) {
      out << criterion_name(r.criterion) << ',' << format_name(r.format) << ','
          << fmt_g17(r.bandwidth_hz / 1e9) << ',' << r.ladder[i] << ','
          << fmt_g17(r.ladder_peaks[i]) << ',' << fmt_g17(r.ladder_peak_powers[i]) << ','
          << r.reference_steps << ',' << fmt_g17(r.reference_peak) << ','
          << fmt_g17(r.tolerance) << ',' << r.chosen_steps << ','
          << (r.saturated ? 1 : 0) << "\n";
    }
  }
}

std::vector<double> parse_power_range(const std::string& text) {
  double start = 0, stop = 0, step = 0;
  char extra = 0;
  const int n = std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &extra);
  if (n != 3 || step <= 0.0)
    throw std::invalid_argument("power range must be 'start:stop:step' with a positive step: " +
                                text);
  std::vector<double> powers;
  for (double p = start; p <= stop + 1e-9; p += step) powers.push_back(p);
  if (powers.empty()) throw std::invalid_argument("empty power range: " + text);
  return powers;
}

}  // namespace mcdbp
