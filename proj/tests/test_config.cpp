#include <doctest.h>

#include <cstdlib>

#include "mcdbp/config.hpp"

using namespace mcdbp;

namespace {

// A complete document spelling out the full transmission-table system.
const char* kFullDocument = R"(
# full system description
wdm.n_channels = 9
wdm.symbol_rate_hz = 32e9
wdm.channel_spacing_hz = 32e9
wdm.rolloff = 0.001
wdm.centre_wavelength_m = 1550e-9
wdm.format = 256qam
wdm.n_symbols = 262144
wdm.sim_oversampling = 18
fiber.alpha_db_per_km = 0.2
fiber.dispersion_ps_nm_km = 17
fiber.gamma_per_w_km = 1.2
fiber.span_length_km = 80
fiber.steps_per_span = 800
link.n_spans = 25
link.noise_figure_db = 4.5
launch_power_dbm = 0
master_seed = 42
)";

}  // namespace

TEST_SUITE("config") {

TEST_CASE("full document loads with the tabulated values") {
  const SystemConfig cfg = load_config(kFullDocument);
  CHECK(cfg.wdm.symbol_rate_hz == 32e9);
  CHECK(cfg.wdm.n_channels == 9);
  CHECK(cfg.link.n_spans == 25);
  CHECK(cfg.wdm.format == ModFormat::qam256);
  CHECK(cfg.link.fiber.steps_per_span == 800);
  CHECK(cfg.master_seed == 42);
  // defaults
  CHECK(cfg.link.fiber.manakov_factor == doctest::Approx(8.0 / 9.0));
  CHECK(cfg.link.fiber.step_rule == StepRule::logarithmic);
  CHECK(!cfg.dbp.has_value());
}

TEST_CASE("zero channels is rejected by name") {
  std::string doc = kFullDocument;
  doc.replace(doc.find("wdm.n_channels = 9"), 18, "wdm.n_channels = 0");
  CHECK_THROWS_WITH_AS(load_config(doc), doctest::Contains("n_channels"), ConfigError);
}

TEST_CASE("missing key is named") {
  std::string doc = kFullDocument;
  const auto pos = doc.find("wdm.rolloff = 0.001");
  doc.erase(pos, doc.find('\n', pos) - pos);
  CHECK_THROWS_WITH_AS(load_config(doc), doctest::Contains("wdm.rolloff"), ConfigError);
}

TEST_CASE("unknown keys are listed") {
  std::string doc = kFullDocument;
  doc += "wdm.bogus = 1\nanother.unknown = 2\n";
  try {
    load_config(doc);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("wdm.bogus") != std::string::npos);
    CHECK(msg.find("another.unknown") != std::string::npos);
  }
}

TEST_CASE("parse failures carry the line number") {
  CHECK_THROWS_WITH_AS(load_config("wdm.n_channels = 9\nnot a kv line\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(load_config("master_seed = 1\nmaster_seed = 2\n"),
                       doctest::Contains("duplicate"), ConfigError);
}

TEST_CASE("presets") {
  const SystemConfig paper = paper_preset();
  // Transmission-table rows, verbatim.
  CHECK(paper.wdm.symbol_rate_hz == 32e9);
  CHECK(paper.wdm.channel_spacing_hz == 32e9);
  CHECK(paper.wdm.centre_wavelength_m == 1550e-9);
  CHECK(paper.wdm.n_channels == 9);
  CHECK(paper.wdm.rolloff == 0.001);
  CHECK(paper.link.fiber.alpha_db_per_km == 0.2);
  CHECK(paper.link.fiber.dispersion_ps_nm_km == 17.0);
  CHECK(paper.link.fiber.gamma_per_w_km == 1.2);
  CHECK(paper.link.fiber.span_length_km == 80.0);
  CHECK(paper.link.n_spans == 25);
  CHECK(paper.link.fiber.steps_per_span == 800);
  CHECK(paper.link.noise_figure_db == 4.5);
  CHECK(paper.wdm.n_symbols == (std::size_t(1) << 18));
  CHECK(paper.wdm.sim_oversampling == 18);  // 2 x n_channels
  CHECK_NOTHROW(validate(paper));

  const SystemConfig desk = desk_preset();
  CHECK(desk.wdm.n_channels == 3);
  CHECK(desk.link.n_spans == 10);
  CHECK(desk.link.fiber.steps_per_span == 200);
  CHECK(desk.wdm.n_symbols == (std::size_t(1) << 13));
  CHECK_NOTHROW(validate(desk));

  // preset + override document
  const SystemConfig cfg = load_config("preset = desk\nlaunch_power_dbm = -2\n");
  CHECK(cfg.launch_power_dbm == -2.0);
  CHECK(cfg.wdm.n_channels == 3);
  CHECK(cfg.scale_preset == ScalePreset::desk);
}

TEST_CASE("serialize/load round trip") {
  SystemConfig cfg = desk_preset();
  cfg.launch_power_dbm = -1.25;
  cfg.master_seed = 987654321;
  DbpSpec dbp;
  dbp.bandwidth_hz = 3 * cfg.wdm.channel_spacing_hz;
  dbp.steps_per_span = 50;
  dbp.filter_shape = SelectionShape::ideal_brickwall;
  dbp.launch_power_dbm = cfg.launch_power_dbm;
  cfg.dbp = dbp;

  const SystemConfig reloaded = load_config(serialize_config(cfg));
  CHECK(reloaded == cfg);

  // EDC-only round trip too
  SystemConfig edc_cfg = paper_preset();
  CHECK(load_config(serialize_config(edc_cfg)) == edc_cfg);
}

TEST_CASE("dbp keys require compensation = dbp") {
  CHECK_THROWS_WITH_AS(load_config("preset = desk\ndbp.steps_per_span = 10\n"),
                       doctest::Contains("compensation"), ConfigError);
  // order independent: dbp key above the compensation line
  const SystemConfig cfg = load_config(
      "preset = desk\ndbp.steps_per_span = 10\ncompensation = dbp\n"
      "dbp.bandwidth_hz = 96e9\n");
  REQUIRE(cfg.dbp.has_value());
  CHECK(cfg.dbp->steps_per_span == 10);
  CHECK(cfg.dbp->bandwidth_hz == 96e9);
}

TEST_CASE("dbp bandwidth must be an odd channel multiple") {
  SystemConfig cfg = desk_preset();
  DbpSpec dbp;
  dbp.steps_per_span = 10;
  dbp.bandwidth_hz = 2 * cfg.wdm.channel_spacing_hz;  // even
  cfg.dbp = dbp;
  CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("odd multiple"), ConfigError);
  cfg.dbp->bandwidth_hz = 5 * cfg.wdm.channel_spacing_hz;  // > n_channels
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.dbp->bandwidth_hz = 3 * cfg.wdm.channel_spacing_hz;
  CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("beta2 conversion") {
  // -D lambda^2/(2 pi c) by hand: 17 ps/nm/km at 1550 nm -> -21.682 ps^2/km.
  CHECK(beta2_from_dispersion(17.0, 1550e-9) == doctest::Approx(-21.6823).epsilon(5e-4));
  CHECK(beta2_from_dispersion(0.0, 1550e-9) == 0.0);
  CHECK(beta2_from_dispersion(-17.0, 1550e-9) == doctest::Approx(21.6823).epsilon(5e-4));

  // odd in D
  for (double d : {1.0, 5.5, 17.0, 20.7})
    CHECK(beta2_from_dispersion(-d, 1550e-9) == doctest::Approx(-beta2_from_dispersion(d, 1550e-9)));

  // strictly monotone in lambda^2 at fixed D > 0 (more negative)
  double prev = 0.0;
  bool first = true;
  for (double lam : {1300e-9, 1450e-9, 1550e-9, 1610e-9}) {
    const double b = beta2_from_dispersion(17.0, lam);
    if (!first) CHECK(b < prev);
    prev = b;
    first = false;
  }

  CHECK_THROWS_AS(beta2_from_dispersion(17.0, 0.0), ConfigError);
}

TEST_CASE("span gain") {
  FiberSpec f;
  f.alpha_db_per_km = 0.2;
  f.span_length_km = 80.0;
  CHECK(span_gain_db(f) == doctest::Approx(16.0));
  f.span_length_km = 0.0;
  CHECK(span_gain_db(f) == 0.0);
  f.alpha_db_per_km = 0.25;
  f.span_length_km = 100.0;
  CHECK(span_gain_db(f) == doctest::Approx(25.0));
}

TEST_CASE("environment override touches only the seed") {
  SystemConfig cfg = desk_preset();
  const SystemConfig before = cfg;
  setenv("MCDBP_MASTER_SEED", "777", 1);
  apply_environment_overrides(cfg);
  unsetenv("MCDBP_MASTER_SEED");
  CHECK(cfg.master_seed == 777);
  cfg.master_seed = before.master_seed;
  CHECK(cfg == before);
}

TEST_CASE("warnings") {
  SystemConfig cfg = desk_preset();
  auto warnings = validation_warnings(cfg);
  // exact-Nyquist spacing with nonzero roll-off -> overlap advisory
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("overlap") != std::string::npos);

  cfg.link.noise_figure_db = 2.0;
  warnings = validation_warnings(cfg);
  CHECK(warnings.size() == 2);
}

TEST_CASE("--set overrides") {
  SystemConfig cfg = desk_preset();
  apply_key(cfg, "launch_power_dbm", "-2");
  CHECK(cfg.launch_power_dbm == -2.0);
  apply_key(cfg, "compensation", "dbp");
  REQUIRE(cfg.dbp.has_value());
  CHECK(cfg.dbp->bandwidth_hz == doctest::Approx(cfg.wdm.aggregate_bandwidth_hz()));
  CHECK(cfg.dbp->launch_power_dbm == -2.0);
  CHECK_THROWS_AS(apply_key(cfg, "no.such.key", "1"), ConfigError);
}

}  // TEST_SUITE
