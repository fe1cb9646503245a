#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elicit/elicitation.hpp"
#include "elicit/generator.hpp"

namespace elicit {

struct RunOptions {
  double tau = 0.0;
  /// When set, tau = fraction * (regret bound of the initial simplex).
  std::optional<double> tau_fraction;
  Sense sense = Sense::Max;
  std::size_t max_iterations = 500;
};

/// One simulated run's summary row.
struct RunRow {
  MatroidKind kind = MatroidKind::Scheduling;
  std::size_t n = 0;
  std::size_t p = 0;
  std::uint64_t seed = 0;
  std::size_t queries = 0;
  std::size_t iterations = 0;
  double wall_ms = 0.0;
  std::string status;
  double initial_bound = 0.0;
  double tau = 0.0;
  double final_bound = 0.0;
  std::string error;
};

struct RunOutcome {
  RunRow row;
  std::vector<IterationRecord> trace;
};

/// Seed used for the simulated decision maker of run `seed`.
std::uint64_t oracle_seed(std::uint64_t seed);

/// Generates the instance, draws the hidden weights and runs elicitation.
/// Failures are captured in `row.error` / status "Error".
RunOutcome execute_run(const GeneratorSpec& spec, const RunOptions& options);

/// Same, on a given problem and oracle.
RunOutcome execute_run(const Problem& problem, const SimulatedOracle& oracle,
                       const RunOptions& options);

struct ExperimentBatch {
  std::vector<MatroidKind> kinds;
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> columns;
  std::size_t repetitions = 20;
  std::uint64_t base_seed = 1;
};

/// Every (kind, n, p, repetition) cell, ordered kind-major. Runs execute on
/// up to `workers` threads; results keep grid order.
std::vector<RunOutcome> run_batch(const ExperimentBatch& batch, const RunOptions& options,
                                  std::size_t workers = 1);

/// With `timing` false the wall-clock columns are written as 0 so that
/// repeated batches are byte-identical.
std::string rows_to_csv(const std::vector<RunOutcome>& outcomes, bool timing = true);
std::string trace_to_csv(const std::vector<IterationRecord>& trace, bool timing = true);

double median(std::vector<double> values);

}  // namespace elicit
