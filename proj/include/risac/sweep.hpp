#pragma once

#include <string>
#include <vector>

#include "risac/driver.hpp"
#include "risac/scenario.hpp"

namespace risac {

enum class SweepParam { kPower, kElements, kRadarSnr };

const char* sweep_param_name(SweepParam p);
bool parse_sweep_param(const std::string& text, SweepParam& out);

/// One Monte-Carlo study: a swept scalar, a trial count, the methods to
/// compare, and the base scenario every cell starts from. Values carry the
/// file units (Watts, element count, dB).
struct SweepSpec {
  SweepParam parameter = SweepParam::kPower;
  std::vector<double> values;
  int trials = 1;
  std::vector<Method> methods;
  Scenario base;
};

struct SweepRow {
  Method method = Method::kProposed;
  double value = 0.0;
  double mean_sum_rate = 0.0; // nan when every trial failed
  double std_sum_rate = 0.0;
  int trials = 0;
  double mean_iters = 0.0;
  int failures = 0;
};

struct SweepResult {
  SweepParam parameter = SweepParam::kPower;
  std::vector<SweepRow> rows;
};

std::vector<std::string> validate(const SweepSpec& spec);

/// Key/value sweep file; `scenario` paths resolve against base_dir. Missing
/// `scenario` falls back to the desk default.
SweepSpec parse_sweep_spec(const std::string& text, const std::string& origin,
                           const std::string& base_dir);
SweepSpec load_sweep_spec(const std::string& path);

/// Runs trials concurrently (threads <= 0 picks the hardware count). At
/// trial t every method sees the identical channel draw (stream 2t) and the
/// random-ris baseline its phase draw (stream 2t + 1), so comparisons are
/// paired. Infeasible or degenerate runs count as failures and are excluded
/// from the cell statistics.
SweepResult run_sweep(const SweepSpec& spec, int threads = 0);

/// CSV with header method,param,value,mean_sum_rate,std_sum_rate,trials,
/// mean_iters,failures. Doubles print with %.17g so rewriting is
/// byte-identical and parsing is exact.
std::string format_csv(const SweepResult& result);
void emit_csv(const SweepResult& result, const std::string& path);
SweepResult parse_csv(const std::string& text);

/// True when some cell has failures == trials (CLI exit code 2).
bool any_cell_all_failed(const SweepResult& result);

}  // namespace risac
