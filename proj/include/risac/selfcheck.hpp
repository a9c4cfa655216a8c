#pragma once

#include <string>
#include <vector>

namespace risac {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast invariant and oracle sweep on small instances, used by the `check`
/// subcommand. Everything here is seeded internally and deterministic.
std::vector<CheckResult> run_self_check();

}  // namespace risac
