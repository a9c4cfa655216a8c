#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "risac/driver.hpp"
#include "risac/selfcheck.hpp"
#include "risac/sweep.hpp"

namespace {

int cmd_run(const std::string& config_path, std::uint64_t seed, bool has_seed,
            const std::string& method_name_arg, const std::string& out_path,
            const std::string& dump_channels_path,
            const std::string& load_channels_path) {
  risac::Scenario scenario =
      config_path.empty() ? risac::desk_scenario()
                          : risac::load_scenario(config_path);
  if (has_seed) scenario.config.seed = seed;

  risac::Method method;
  if (!risac::parse_method(method_name_arg, method)) {
    std::cerr << "unknown method '" << method_name_arg
              << "' (expected proposed, random-ris or no-ris)\n";
    return 1;
  }

  risac::ChannelSet cs;
  if (!load_channels_path.empty()) {
    cs = risac::load_channels(load_channels_path);
  } else {
    risac::Rng rng = risac::Rng::derive(scenario.config.seed, 0);
    cs = risac::generate_channels(scenario.config, scenario.geometry, rng);
  }
  if (!dump_channels_path.empty()) risac::save_channels(dump_channels_path, cs);

  const risac::SolveReport report =
      method == risac::Method::kProposed
          ? risac::solve(cs, scenario.config)
          : risac::solve_baseline(cs, scenario.config, method);
  const std::string json = risac::report_to_json(report, scenario.config);
  if (out_path.empty()) {
    std::cout << json << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot open '" << out_path << "' for writing\n";
      return 1;
    }
    out << json << "\n";
  }
  return 0;
}

int cmd_sweep(const std::string& spec_path, std::uint64_t seed, bool has_seed,
              int trials, const std::string& methods_arg,
              const std::string& out_path, int threads) {
  risac::SweepSpec spec = risac::load_sweep_spec(spec_path);
  if (has_seed) spec.base.config.seed = seed;
  if (trials > 0) spec.trials = trials;
  if (!methods_arg.empty()) {
    spec.methods.clear();
    std::string token;
    std::string normalized = methods_arg;
    for (char& c : normalized)
      if (c == ',') c = ' ';
    std::istringstream is(normalized);
    while (is >> token) {
      risac::Method m;
      if (!risac::parse_method(token, m)) {
        std::cerr << "unknown method '" << token << "'\n";
        return 1;
      }
      spec.methods.push_back(m);
    }
  }
  const auto problems = risac::validate(spec);
  if (!problems.empty()) {
    for (const auto& p : problems) std::cerr << p << "\n";
    return 1;
  }

  const risac::SweepResult result = risac::run_sweep(spec, threads);
  if (out_path.empty()) {
    std::cout << risac::format_csv(result);
  } else {
    risac::emit_csv(result, out_path);
  }
  return risac::any_cell_all_failed(result) ? 2 : 0;
}

int cmd_check() {
  const auto results = risac::run_self_check();
  bool all = true;
  for (const auto& r : results) {
    std::printf("[%s] %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Joint transmit beamforming and reflecting-surface design solver"};
  app.require_subcommand(1);

  std::string config_path, out_path, method_arg = "proposed";
  std::string dump_channels_path, load_channels_path;
  std::uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "Solve one channel realization");
  run->add_option("--config", config_path,
                  "Scenario file (defaults to the built-in desk setup)");
  CLI::Option* run_seed =
      run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--method", method_arg,
                  "proposed | random-ris | no-ris (default proposed)");
  run->add_option("--out", out_path, "Write the JSON report here");
  run->add_option("--dump-channels", dump_channels_path,
                  "Save the generated channel realization");
  run->add_option("--load-channels", load_channels_path,
                  "Replay a saved channel realization");

  std::string spec_path, methods_list;
  int trials = 0, threads = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "Monte-Carlo parameter sweep");
  sweep->add_option("spec", spec_path, "Sweep spec file")->required();
  CLI::Option* sweep_seed =
      sweep->add_option("--seed", seed, "Override the scenario seed");
  sweep->add_option("--trials", trials, "Override the trial count");
  sweep->add_option("--method", methods_list,
                    "Comma or space separated method subset");
  sweep->add_option("--out", out_path, "CSV output path (default stdout)");
  sweep->add_option("--threads", threads,
                    "Worker threads (default: hardware count)");

  app.add_subcommand("check", "Run the built-in invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("run"))
      return cmd_run(config_path, seed, !run_seed->empty(), method_arg,
                     out_path, dump_channels_path, load_channels_path);
    if (app.got_subcommand("sweep"))
      return cmd_sweep(spec_path, seed, !sweep_seed->empty(), trials,
                       methods_list, out_path, threads);
    if (app.got_subcommand("check")) return cmd_check();
  } catch (const risac::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
