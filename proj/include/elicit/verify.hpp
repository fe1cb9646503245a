#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "elicit/elicitation.hpp"

namespace elicit {

struct CheckResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void record(bool ok, const std::string& what);
};

struct VerifyReport {
  ElicitationReport run;
  std::vector<CheckResult> checks;

  bool ok() const;
};

/// Runs elicitation against the oracle and at every iteration compares the
/// fast paths with independent computations:
///  - greedy optimum at each vertex vs. base enumeration (n <= enumeration_limit);
///  - incremental region vs. brute-force vertex enumeration (small cases);
///  - pooled regret bound >= exact minimax regret, exact regret non-increasing;
///  - the hidden weights stay inside the region;
///  - stop conditions are sound.
VerifyReport verify_elicitation(const Problem& problem, const SimulatedOracle& oracle,
                                const ElicitationConfig& config = {},
                                std::size_t enumeration_limit = 12);

}  // namespace elicit
