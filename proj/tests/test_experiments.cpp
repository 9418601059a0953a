#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "mcdbp/experiments.hpp"

using namespace mcdbp;

namespace {

// Single-channel, short-link, small-frame system: a full pipeline point in
// well under a second.
SystemConfig tiny_config() {
  SystemConfig cfg = desk_preset();
  cfg.wdm.n_channels = 1;
  cfg.wdm.n_symbols = 1 << 10;
  cfg.wdm.sim_oversampling = 8;
  cfg.link.n_spans = 2;
  cfg.link.fiber.steps_per_span = 8;
  cfg.master_seed = 31;
  validate(cfg);
  return cfg;
}

SweepPoint fake_point(double power, double snr, double air) {
  SweepPoint pt;
  pt.power_dbm = power;
  pt.report.snr_db = snr;
  pt.report.air_total_bps = air;
  return pt;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("run_single_point produces a sane report") {
  const SystemConfig cfg = tiny_config();
  const MetricsReport report = run_single_point(cfg);
  CHECK(report.snr_db > 10.0);
  CHECK(report.snr_db <= kSnrCapDb);
  CHECK(report.mi_bits_per_2d > 0.0);
  CHECK(report.air_total_bps > 0.0);
  CHECK(report.n_symbols_used == cfg.wdm.n_symbols);
}

TEST_CASE("power_sweep: empty, sorted, deterministic") {
  const SystemConfig cfg = tiny_config();
  CHECK(power_sweep(cfg, {}).empty());

  const std::vector<double> powers = {0.0, -4.0, -2.0};
  const auto points = power_sweep(cfg, powers, 2);
  REQUIRE(points.size() == 3);
  CHECK(points[0].power_dbm == -4.0);
  CHECK(points[2].power_dbm == 0.0);
  for (const auto& pt : points) CHECK(pt.ok());

  const auto again = power_sweep(cfg, powers, 1);  // different worker count
  for (std::size_t i = 0; i < points.size(); ++i) {
    CHECK(points[i].report.snr_db == again[i].report.snr_db);
    CHECK(points[i].report.air_total_bps == again[i].report.air_total_bps);
  }
}

TEST_CASE("power_sweep records per-point failures and continues") {
  SystemConfig cfg = tiny_config();
  DbpSpec bad;
  bad.bandwidth_hz = cfg.wdm.channel_spacing_hz;
  bad.steps_per_span = 8;
  cfg.dbp = bad;
  cfg.wdm.sim_oversampling = 0;  // breaks shape_channel downstream
  const auto points = power_sweep(cfg, {0.0, 2.0});
  REQUIRE(points.size() == 2);
  for (const auto& pt : points) {
    CHECK(!pt.ok());
    CHECK(!pt.error.empty());
  }
}

TEST_CASE("find_optimum argmax with ties toward lower power") {
  const std::vector<SweepPoint> single = {fake_point(1.0, 10.0, 1e12)};
  CHECK(find_optimum(single, Criterion::snr).point.power_dbm == 1.0);
  CHECK(!find_optimum(single, Criterion::snr).on_boundary);

  const std::vector<SweepPoint> rising = {fake_point(-2.0, 8.0, 1e12),
                                          fake_point(0.0, 9.0, 2e12),
                                          fake_point(2.0, 10.0, 3e12)};
  const auto opt = find_optimum(rising, Criterion::snr);
  CHECK(opt.point.power_dbm == 2.0);
  CHECK(opt.on_boundary);

  const std::vector<SweepPoint> concave = {fake_point(-2.0, 10.0, 1e12),
                                           fake_point(0.0, 12.0, 2e12),
                                           fake_point(2.0, 11.0, 1.5e12)};
  CHECK(find_optimum(concave, Criterion::snr).point.power_dbm == 0.0);
  CHECK(!find_optimum(concave, Criterion::snr).on_boundary);

  // tie breaks toward lower power (strict > comparison keeps the first)
  const std::vector<SweepPoint> tied = {fake_point(-2.0, 12.0, 1e12),
                                        fake_point(0.0, 12.0, 1e12)};
  CHECK(find_optimum(tied, Criterion::snr).point.power_dbm == -2.0);

  CHECK_THROWS_AS(find_optimum({}, Criterion::snr), std::invalid_argument);
}

TEST_CASE("mrnsps: reference-only ladder and saturation flag") {
  SystemConfig cfg = tiny_config();
  const std::vector<double> powers = {-2.0, 0.0};

  const auto ref_only = mrnsps_search(cfg, cfg.wdm.channel_spacing_hz, cfg.wdm.format,
                                      Criterion::snr, {cfg.link.fiber.steps_per_span}, -1.0,
                                      powers, 2);
  CHECK(ref_only.chosen_steps == cfg.link.fiber.steps_per_span);
  CHECK(!ref_only.saturated);
  CHECK(ref_only.reference_peak == ref_only.ladder_peaks[0]);

  // impossible tolerance (demand better than the reference) -> saturation
  const auto impossible = mrnsps_search(cfg, cfg.wdm.channel_spacing_hz, cfg.wdm.format,
                                        Criterion::snr, {1, 2}, -1.0e6, powers, 2);
  CHECK(impossible.saturated);
  CHECK(impossible.chosen_steps == cfg.link.fiber.steps_per_span);
}

TEST_CASE("default ladder includes the forward step count") {
  SystemConfig cfg = tiny_config();
  cfg.link.fiber.steps_per_span = 123;
  const auto ladder = default_step_ladder(cfg);
  CHECK(std::find(ladder.begin(), ladder.end(), 123) != ladder.end());
  CHECK(std::is_sorted(ladder.begin(), ladder.end()));
  CHECK(std::find(ladder.begin(), ladder.end(), 500) != ladder.end());
}

TEST_CASE("results CSV: header, round trip, unknown columns") {
  CHECK(std::string(kResultsCsvHeader) ==
        "format,power_dbm,bandwidth_ghz,steps_per_span,snr_db,mi_bits,air_tbps,seed,wallclock_s");

  std::vector<SweepPoint> points;
  SweepPoint a = fake_point(-1.5, 13.25, 2.75e12);
  a.format = ModFormat::qam64;
  a.report.mi_bits_per_2d = 4.774932159665;
  a.seed = 424242;
  a.wallclock_s = 1.5;
  points.push_back(a);
  SweepPoint b = fake_point(0.5, 14.5, 3.1e12);
  b.format = ModFormat::qpsk;
  b.dbp_bandwidth_hz = 96e9;
  b.dbp_steps_per_span = 25;
  points.push_back(b);
  SweepPoint failed = fake_point(2.0, 0.0, 0.0);
  failed.error = "boom";
  points.push_back(failed);  // not persisted

  const char* path = "exp_results.csv";
  write_results_csv(points, path);
  const auto back = load_results_csv(path);
  std::remove(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].format == ModFormat::qam64);
  CHECK(back[0].power_dbm == a.power_dbm);
  CHECK(back[0].report.snr_db == a.report.snr_db);
  CHECK(back[0].report.mi_bits_per_2d == a.report.mi_bits_per_2d);
  CHECK(back[0].report.air_total_bps == a.report.air_total_bps);
  CHECK(back[0].seed == 424242);
  CHECK(back[0].wallclock_s == 1.5);
  CHECK(back[1].dbp_bandwidth_hz == 96e9);
  CHECK(back[1].dbp_steps_per_span == 25);
  CHECK(back[1].is_edc() == false);
  CHECK(back[0].is_edc() == true);

  // unknown columns are named
  {
    std::ofstream out(path);
    out << "format,power_dbm,bogus_column\nQPSK,0,1\n";
  }
  CHECK_THROWS_WITH_AS(load_results_csv(path), doctest::Contains("bogus_column"),
                       std::runtime_error);
  std::remove(path);
}

TEST_CASE("timing column can be zeroed for byte-stable output") {
  std::vector<SweepPoint> points = {fake_point(0.0, 10.0, 1e12)};
  points[0].wallclock_s = 0.123;
  const char* p1 = "exp_t1.csv";
  const char* p2 = "exp_t2.csv";
  write_results_csv(points, p1, false);
  points[0].wallclock_s = 0.456;  // different timing, same data
  write_results_csv(points, p2, false);
  std::ifstream f1(p1), f2(p2);
  std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  std::remove(p1);
  std::remove(p2);
  CHECK(s1 == s2);
}

TEST_CASE("mrnsps summary and detail files") {
  MrnspsResult r;
  r.format = ModFormat::qam16;
  r.bandwidth_hz = 96e9;
  r.criterion = Criterion::air;
  r.ladder = {1, 5, 25};
  r.ladder_peaks = {1e12, 2e12, 2.05e12};
  r.ladder_peak_powers = {0.0, 1.0, 1.0};
  r.reference_steps = 200;
  r.reference_peak = 2.06e12;
  r.tolerance = 0.1e12;
  r.chosen_steps = 5;

  const char* summary = "exp_mrnsps.csv";
  const char* detail = "exp_mrnsps_detail.csv";
  write_mrnsps_summary_csv({r}, summary);
  write_mrnsps_detail_csv({r}, detail);
  std::ifstream s(summary);
  std::string header, row;
  std::getline(s, header);
  std::getline(s, row);
  CHECK(header == "criterion,format,96GHz");
  CHECK(row == "air,16QAM,5");
  std::ifstream d(detail);
  std::getline(d, header);
  int rows = 0;
  while (std::getline(d, row)) ++rows;
  CHECK(rows == 3);
  std::remove(summary);
  std::remove(detail);
}

TEST_CASE("power range parser") {
  const auto grid = parse_power_range("-10:4:2");
  REQUIRE(grid.size() == 8);
  CHECK(grid.front() == -10.0);
  CHECK(grid.back() == 4.0);
  CHECK_THROWS_AS(parse_power_range("1:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_power_range("1:2:-1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_power_range("pear"), std::invalid_argument);
}

}  // TEST_SUITE
