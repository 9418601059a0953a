#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mcdbp/config.hpp"
#include "mcdbp/metrics.hpp"

namespace mcdbp {

// One end-to-end run: frames -> shaping -> multiplex -> launch -> link ->
// (EDC | DBP) -> centre-channel matched filter -> SNR/MI/AIR.
MetricsReport run_single_point(const SystemConfig& cfg);

// Dispatches fn(0..n-1) over a small thread pool. workers <= 0 picks the
// hardware concurrency. Results must be written to pre-sized slots; the
// schedule never affects values.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

enum class Criterion { snr, air };
const char* criterion_name(Criterion c);
std::optional<Criterion> parse_criterion(const std::string& name);

struct SweepPoint {
  ModFormat format = ModFormat::qpsk;
  double power_dbm = 0.0;
  double dbp_bandwidth_hz = 0.0;  // 0 = EDC
  int dbp_steps_per_span = 0;     // 0 = EDC
  std::uint64_t seed = 0;
  MetricsReport report;
  double wallclock_s = 0.0;
  std::string error;  // empty = ok

  bool is_edc() const { return dbp_bandwidth_hz == 0.0; }
  bool ok() const { return error.empty(); }
  double metric(Criterion c) const {
    return c == Criterion::snr ? report.snr_db : report.air_total_bps;
  }
};

// One pipeline per power, sorted by power; per-point failures are recorded in
// SweepPoint::error and the sweep continues.
std::vector<SweepPoint> power_sweep(const SystemConfig& cfg, const std::vector<double>& powers_dbm,
                                    int workers = 0);

struct OptimumResult {
  SweepPoint point;
  bool on_boundary = false;  // maximum sits on the swept range edge
};
// Argmax over the chosen metric among successful points; ties break toward
// lower power.
OptimumResult find_optimum(const std::vector<SweepPoint>& points, Criterion criterion);

struct MrnspsResult {
  ModFormat format = ModFormat::qpsk;
  double bandwidth_hz = 0.0;
  Criterion criterion = Criterion::snr;
  std::vector<int> ladder;
  std::vector<double> ladder_peaks;        // peak metric per ladder entry
  std::vector<double> ladder_peak_powers;  // power at each peak
  int reference_steps = 0;
  double reference_peak = 0.0;
  double tolerance = 0.0;
  int chosen_steps = 0;
  bool saturated = false;  // no ladder entry met the tolerance
};

// Reference peak at the forward step count; chosen = smallest ladder entry
// whose own-optimum peak is within tolerance of it. tolerance < 0 selects the
// configured default for the criterion.
MrnspsResult mrnsps_search(const SystemConfig& cfg, double bandwidth_hz, ModFormat format,
                           Criterion criterion, const std::vector<int>& ladder,
                           double tolerance, const std::vector<double>& powers_dbm,
                           int workers = 0);

// {1, 2, 5, 10, 25, 50, 75, 100, 150, 200, 250, 500} plus the forward count.
std::vector<int> default_step_ladder(const SystemConfig& cfg);

// Results CSV (documented column order). include_timing=false zeroes the
// wallclock column so two identical runs produce byte-identical files.
extern const char* kResultsCsvHeader;
void write_results_csv(const std::vector<SweepPoint>& points, const std::string& path,
                       bool include_timing = true);
std::vector<SweepPoint> load_results_csv(const std::string& path);

// Table-shaped MRNSPS summary (rows: criterion x format, columns: bandwidths)
// plus a long-form detail file with every ladder peak.
void write_mrnsps_summary_csv(const std::vector<MrnspsResult>& results, const std::string& path);
void write_mrnsps_detail_csv(const std::vector<MrnspsResult>& results, const std::string& path);

// "start:stop:step" -> inclusive power grid.
std::vector<double> parse_power_range(const std::string& text);

}  // namespace mcdbp
