#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "risac/sweep.hpp"

// Drives the installed binary through std::system; the test runner passes
// its location in RISAC_CLI. All scratch files live in the working
// directory under a cli_ prefix and are removed per test case.

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  REQUIRE(out.good());
}

CliResult run_cli(const std::string& args) {
  const char* exe = std::getenv("RISAC_CLI");
  REQUIRE_MESSAGE(exe != nullptr, "RISAC_CLI must point at the binary");
  const std::string cmd = std::string(exe) + " " + args +
                          " > cli_stdout.tmp 2> cli_stderr.tmp";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp("cli_stdout.tmp");
  r.err = slurp("cli_stderr.tmp");
  std::remove("cli_stdout.tmp");
  std::remove("cli_stderr.tmp");
  return r;
}

// Small setup so every spawned solve finishes quickly; extra samples keep
// the radar floor reachable down to the lowest power value.
const char* kScenarioText =
    "antennas = 2\n"
    "users = 1\n"
    "ris_elements = 4\n"
    "samples = 1000\n"
    "power_w = 15\n"
    "radar_snr_db = 5\n"
    "target_rcs = 1\n"
    "radar_noise_dbm = -80\n"
    "user_noise_dbm = -80\n"
    "max_outer = 15\n"
    "bs_ris_distance_m = 50\n"
    "ris_target_distance_m = 3\n"
    "ris_user_distance_m = 8\n"
    "bs_target_distance_m = 50 53\n"
    "bs_user_distance_m = 50 58\n"
    "bs_ris_exponent = 2.2\n"
    "ris_target_exponent = 2.2\n"
    "ris_user_exponent = 2.3\n"
    "bs_target_exponent = 2.4\n"
    "bs_user_exponent = 3.5\n";

void write_scenario() { write_file("cli_scn.cfg", kScenarioText); }

nlohmann::json load_json(const std::string& path) {
  const std::string text = slurp(path);
  REQUIRE_FALSE(text.empty());
  return nlohmann::json::parse(text);
}

}  // namespace

TEST_CASE("run writes a deterministic json report") {
  write_scenario();
  CHECK(run_cli("run --config cli_scn.cfg --seed 3 --out cli_a.json").code ==
        0);
  CHECK(run_cli("run --config cli_scn.cfg --seed 3 --out cli_b.json").code ==
        0);
  const nlohmann::json a = load_json("cli_a.json");
  const nlohmann::json b = load_json("cli_b.json");
  CHECK(a["method"] == "proposed");
  CHECK(a["metadata"]["seed"] == 3);
  CHECK(a["sum_rate"].get<double>() == b["sum_rate"].get<double>());
  CHECK(a["iterations"] == b["iterations"]);
  CHECK(a["trace"].size() == b["trace"].size());
  CHECK_FALSE(a["trace"].empty());

  // Without --out the report goes to stdout.
  const CliResult piped = run_cli("run --config cli_scn.cfg --seed 3");
  CHECK(piped.code == 0);
  const nlohmann::json c = nlohmann::json::parse(piped.out);
  CHECK(c["sum_rate"].get<double>() == a["sum_rate"].get<double>());

  const CliResult none =
      run_cli("run --config cli_scn.cfg --seed 3 --method no-ris");
  CHECK(none.code == 0);
  CHECK(nlohmann::json::parse(none.out)["method"] == "no-ris");

  std::remove("cli_scn.cfg");
  std::remove("cli_a.json");
  std::remove("cli_b.json");
}

TEST_CASE("run rejects bad input with exit code 1") {
  const CliResult missing = run_cli("run --config cli_absent.cfg");
  CHECK(missing.code == 1);
  CHECK(missing.err.find("cannot open config file") != std::string::npos);

  write_scenario();
  const CliResult method =
      run_cli("run --config cli_scn.cfg --method maximal");
  CHECK(method.code == 1);
  CHECK(method.err.find("unknown method 'maximal'") != std::string::npos);

  write_file("cli_bad.cfg", "antennas = -2\n");
  const CliResult bad = run_cli("run --config cli_bad.cfg");
  CHECK(bad.code == 1);
  CHECK_FALSE(bad.err.empty());

  CHECK(run_cli("").code != 0);  // a subcommand is required

  std::remove("cli_scn.cfg");
  std::remove("cli_bad.cfg");
}

TEST_CASE("channel dump and replay") {
  write_scenario();
  const CliResult dumped = run_cli(
      "run --config cli_scn.cfg --seed 3 --dump-channels cli_ch.bin "
      "--out cli_c.json");
  CHECK(dumped.code == 0);
  // Replay ignores the generation seed entirely.
  const CliResult replay = run_cli(
      "run --config cli_scn.cfg --seed 99 --load-channels cli_ch.bin "
      "--out cli_d.json");
  CHECK(replay.code == 0);
  const nlohmann::json c = load_json("cli_c.json");
  const nlohmann::json d = load_json("cli_d.json");
  CHECK(c["sum_rate"].get<double>() == d["sum_rate"].get<double>());
  CHECK(c["radar_bound"].get<double>() == d["radar_bound"].get<double>());

  std::remove("cli_scn.cfg");
  std::remove("cli_ch.bin");
  std::remove("cli_c.json");
  std::remove("cli_d.json");
}

TEST_CASE("sweep emits csv and repeats byte for byte") {
  write_scenario();
  write_file("cli_sweep.spec",
             "parameter = power\n"
             "values = 5, 15\n"
             "trials = 2\n"
             "methods = proposed, no-ris\n"
             "scenario = cli_scn.cfg\n");

  CHECK(run_cli("sweep cli_sweep.spec --out cli_s1.csv").code == 0);
  CHECK(run_cli("sweep cli_sweep.spec --out cli_s2.csv").code == 0);
  const std::string s1 = slurp("cli_s1.csv");
  CHECK(s1 == slurp("cli_s2.csv"));
  CHECK(s1.rfind("method,param,value,", 0) == 0);

  const CliResult piped = run_cli("sweep cli_sweep.spec");
  CHECK(piped.code == 0);
  CHECK(piped.out == s1);

  // Flag overrides: trial count, method subset, seed.
  const CliResult one = run_cli("sweep cli_sweep.spec --trials 1");
  CHECK(one.code == 0);
  risac::SweepResult parsed = risac::parse_csv(one.out);
  REQUIRE_FALSE(parsed.rows.empty());
  for (const risac::SweepRow& row : parsed.rows) CHECK(row.trials == 1);

  const CliResult subset = run_cli("sweep cli_sweep.spec --method proposed");
  CHECK(subset.code == 0);
  parsed = risac::parse_csv(subset.out);
  REQUIRE(parsed.rows.size() == 2);
  for (const risac::SweepRow& row : parsed.rows)
    CHECK(row.method == risac::Method::kProposed);

  const CliResult reseeded = run_cli("sweep cli_sweep.spec --seed 9");
  CHECK(reseeded.code == 0);
  CHECK(reseeded.out != s1);

  std::remove("cli_scn.cfg");
  std::remove("cli_sweep.spec");
  std::remove("cli_s1.csv");
  std::remove("cli_s2.csv");
}

TEST_CASE("sweep failure exit codes") {
  write_scenario();
  write_file("cli_floor.spec",
             "parameter = radar_snr\n"
             "values = 200\n"
             "methods = proposed\n"
             "scenario = cli_scn.cfg\n");
  const CliResult floored = run_cli("sweep cli_floor.spec");
  CHECK(floored.code == 2);  // every trial in some cell failed
  CHECK(floored.out.find(",nan,") != std::string::npos);

  const CliResult missing = run_cli("sweep cli_absent.spec");
  CHECK(missing.code == 1);
  CHECK(missing.err.find("cannot open sweep file") != std::string::npos);

  write_file("cli_broken.spec", "parameter = power\nvalues = 5\nfoo = 1\n");
  const CliResult broken = run_cli("sweep cli_broken.spec");
  CHECK(broken.code == 1);
  CHECK(broken.err.find("invalid sweep spec") != std::string::npos);

  write_file("cli_tiny.spec",
             "parameter = power\nvalues = 5\nscenario = cli_scn.cfg\n");
  const CliResult method = run_cli("sweep cli_tiny.spec --method mystery");
  CHECK(method.code == 1);
  CHECK(method.err.find("unknown method 'mystery'") != std::string::npos);

  std::remove("cli_scn.cfg");
  std::remove("cli_floor.spec");
  std::remove("cli_broken.spec");
  std::remove("cli_tiny.spec");
}

TEST_CASE("check reports each invariant on its own line") {
  const CliResult checked = run_cli("check");
  CHECK(checked.code == 0);
  REQUIRE_FALSE(checked.out.empty());
  std::istringstream lines(checked.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    CHECK(line.rfind("[PASS] ", 0) == 0);
    ++count;
  }
  CHECK(count >= 3);
}
