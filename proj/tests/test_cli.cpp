// End-to-end checks of the mcdbp command-line tool. The binary path arrives
// as argv[1]; everything runs inside a scratch directory.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string g_binary;
int g_failures = 0;

#define CHECK_MSG(cond, msg)                                                  \
  do {                                                                        \
    if (!(cond)) {                                                            \
      std::cerr << "FAIL(" << __LINE__ << "): " << msg << "\n";               \
      ++g_failures;                                                           \
    }                                                                         \
  } while (0)

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string cmd = g_binary + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[512];
  while (fgets(buf, sizeof buf, pipe)) r.output += buf;
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

void write_tiny_config(const fs::path& path) {
  std::ofstream out(path);
  out << "preset = desk\n"
         "wdm.n_channels = 1\n"
         "wdm.n_symbols = 1024\n"
         "link.n_spans = 2\n"
         "fiber.steps_per_span = 8\n"
         "master_seed = 5\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: mcdbp_cli_tests <path-to-mcdbp>\n";
    return 1;
  }
  g_binary = argv[1];

  const fs::path dir = fs::temp_directory_path() / "mcdbp_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "tiny.cfg";
  write_tiny_config(cfg);

  // --help enumerates the subcommands, exit 0
  {
    const auto r = run("--help");
    CHECK_MSG(r.exit_code == 0, "--help exit code " << r.exit_code);
    for (const char* sub : {"simulate", "sweep-power", "optimize-steps", "report"})
      CHECK_MSG(r.output.find(sub) != std::string::npos, "--help missing " << sub);
  }

  // unknown flags are errors
  {
    const auto r = run("simulate -c " + cfg.string() + " --no-such-flag");
    CHECK_MSG(r.exit_code == 2, "unknown flag exit " << r.exit_code);
  }

  // missing config file -> exit 2 naming the path
  {
    const auto r = run("simulate -c /nonexistent/nope.cfg");
    CHECK_MSG(r.exit_code == 2, "missing config exit " << r.exit_code);
    CHECK_MSG(r.output.find("/nonexistent/nope.cfg") != std::string::npos,
              "missing config not named: " << r.output);
  }

  // simulate: finite SNR row, --set override honoured in the output CSV
  {
    const fs::path out = dir / "sim";
    const auto r = run("simulate -c " + cfg.string() + " -o " + out.string() +
                       " --set launch_power_dbm=-2");
    CHECK_MSG(r.exit_code == 0, "simulate exit " << r.exit_code << ": " << r.output);
    const std::string csv = slurp(out / "simulate.csv");
    CHECK_MSG(csv.find("QPSK,-2,") != std::string::npos, "override missing in csv: " << csv);
    CHECK_MSG(csv.find("nan") == std::string::npos, "non-finite SNR in csv");
    const std::string meta = slurp(out / "effective_config.txt");
    CHECK_MSG(meta.find("launch_power_dbm = -2") != std::string::npos,
              "override missing in effective config");
  }

  // sweep-power: grid arithmetic -10:4:2 -> 8 points x 2 curves
  {
    const fs::path out = dir / "sweep";
    const auto r = run("sweep-power -c " + cfg.string() + " -o " + out.string() +
                       " --powers -10:4:2 --compensation edc,dbp:full --no-timing --workers 2");
    CHECK_MSG(r.exit_code == 0, "sweep exit " << r.exit_code << ": " << r.output);
    const std::string results = slurp(out / "results.csv");
    CHECK_MSG(count_lines(results) == 1 + 16, "expected 16 rows: " << count_lines(results) - 1);
    CHECK_MSG(fs::exists(out / "curve_edc_snr.csv"), "edc snr curve file");
    CHECK_MSG(fs::exists(out / "curve_dbp_1ch_air.csv"), "dbp air curve file");
    const std::string curve = slurp(out / "curve_edc_snr.csv");
    CHECK_MSG(count_lines(curve) == 1 + 8, "curve rows");

    // byte-identical rerun with --no-timing
    const fs::path out2 = dir / "sweep2";
    run("sweep-power -c " + cfg.string() + " -o " + out2.string() +
        " --powers -10:4:2 --compensation edc,dbp:full --no-timing --workers 1");
    CHECK_MSG(slurp(out / "results.csv") == slurp(out2 / "results.csv"),
              "determinism: results.csv differs between reruns");

    // report over the sweep results
    const auto rep = run("report --results " + (out / "results.csv").string() + " -o " +
                         out.string());
    CHECK_MSG(rep.exit_code == 0, "report exit " << rep.exit_code << ": " << rep.output);
    CHECK_MSG(fs::exists(out / "snr_vs_power.svg"), "snr svg");
    CHECK_MSG(fs::exists(out / "air_vs_power.svg"), "air svg");
    const std::string svg = slurp(out / "snr_vs_power.svg");
    CHECK_MSG(svg.find("<svg") != std::string::npos, "svg content");
    CHECK_MSG(svg.find("polyline") != std::string::npos, "svg polyline");
  }

  // report: header-only file -> "no data", exit 0
  {
    const fs::path empty = dir / "empty.csv";
    std::ofstream(empty) << "format,power_dbm,bandwidth_ghz,steps_per_span,snr_db,mi_bits,"
                            "air_tbps,seed,wallclock_s\n";
    const auto r = run("report --results " + empty.string() + " -o " + dir.string());
    CHECK_MSG(r.exit_code == 0, "empty report exit " << r.exit_code);
    CHECK_MSG(r.output.find("no data") != std::string::npos, "no-data notice: " << r.output);
  }

  // report: mixed formats in one file -> one curve (and legend entry) each
  {
    const fs::path mixed = dir / "mixed.csv";
    std::ofstream(mixed) << "format,power_dbm,bandwidth_ghz,steps_per_span,snr_db,mi_bits,"
                            "air_tbps,seed,wallclock_s\n"
                            "QPSK,-2,0,0,14.0,1.99,0.38,1,0\n"
                            "QPSK,0,0,0,14.5,1.995,0.383,1,0\n"
                            "256QAM,-2,0,0,13.5,4.5,0.86,1,0\n"
                            "256QAM,0,0,0,13.9,4.6,0.88,1,0\n";
    const auto r = run("report --results " + mixed.string() + " -o " + dir.string());
    CHECK_MSG(r.exit_code == 0, "mixed report exit " << r.exit_code);
    CHECK_MSG(r.output.find("QPSK") != std::string::npos &&
                  r.output.find("256QAM") != std::string::npos,
              "per-format rows missing: " << r.output);
    const std::string svg = slurp(dir / "snr_vs_power.svg");
    CHECK_MSG(svg.find("QPSK EDC") != std::string::npos &&
                  svg.find("256QAM EDC") != std::string::npos,
              "per-format legend entries missing");
  }

  // optimize-steps: 1 bandwidth x 1 format x 2 criteria -> 2 summary rows
  {
    const fs::path out = dir / "steps";
    const auto r = run("optimize-steps -c " + cfg.string() + " -o " + out.string() +
                       " --criterion snr,air --bandwidths 1 --formats qpsk --ladder 2,8 "
                       "--powers -2:0:2 --workers 2");
    CHECK_MSG(r.exit_code == 0, "optimize exit " << r.exit_code << ": " << r.output);
    const std::string summary = slurp(out / "mrnsps_summary.csv");
    CHECK_MSG(count_lines(summary) == 1 + 2, "summary rows: " << summary);
    CHECK_MSG(fs::exists(out / "mrnsps_detail.csv"), "detail file");
  }

  fs::remove_all(dir);
  if (g_failures == 0) {
    std::cout << "cli tests passed\n";
    return 0;
  }
  std::cerr << g_failures << " cli test failures\n";
  return 1;
}
