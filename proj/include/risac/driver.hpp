#pragma once

#include <string>
#include <vector>

#include "risac/channels.hpp"
#include "risac/fp_core.hpp"
#include "risac/scenario.hpp"
#include "risac/types.hpp"

namespace risac {

enum class Method { kProposed, kRandomRis, kNoRis };
enum class Termination { kConverged, kMaxIterations, kInfeasible, kDegenerate };

const char* method_name(Method m);
const char* termination_name(Termination t);
bool parse_method(const std::string& text, Method& out);

struct TraceRecord {
  int iteration = 0;
  double sum_rate = 0.0;
  double objective = 0.0;   // transformed objective at the recorded iterate
  double radar_bound = 0.0; // linear, under the filter of this iteration
  double power_residual = 0.0;
  int inner_iterations = 0;
  bool phi_accepted = false;
  double seconds = 0.0; // wall time of the iteration; excluded from
                        // determinism comparisons
};

struct SolveReport {
  Method method = Method::kProposed;
  Termination termination = Termination::kConverged;
  int iterations = 0;
  double initial_sum_rate = 0.0;
  double sum_rate = 0.0;
  double radar_bound = 0.0;
  double radar_bound_db = 0.0;
  std::vector<TraceRecord> trace;
  std::string message;

  CMat beamformer; // final iterates, kept out of the serialized report
  CVec reflection;

  bool converged() const { return termination == Termination::kConverged; }
};

/// JSON text of the report (schema documented in the README).
std::string report_to_json(const SolveReport& report,
                           const SystemConfig& config, int indent = 2);

/// Phase-aligned reflection plus channel-matched beamformer columns: user
/// columns follow the composite user channels, radar columns the two-way
/// target response, every column at equal power and |W|_F^2 = power.
void initialize(const ChannelSet& cs, const SystemConfig& config, CMat& W,
                CVec& phi);

/// Full alternating solve: ratio and scale auxiliaries, receive filter,
/// beamformer, then the reflection inner loop, until the sum rate settles.
SolveReport solve(const ChannelSet& cs, const SystemConfig& config);

/// Baselines hold the reflection fixed (no-ris additionally zeroes every
/// reflected link) and run only the remaining blocks. The two-argument
/// random-ris form draws phases from stream derive(config.seed, 1).
SolveReport solve_baseline(const ChannelSet& cs, const SystemConfig& config,
                           Method mode);
SolveReport solve_baseline(const ChannelSet& cs, const SystemConfig& config,
                           Method mode, const CVec& fixed_phi);

}  // namespace risac
