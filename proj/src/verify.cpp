#include "elicit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace elicit {

namespace {

constexpr double kValueTolerance = 1e-7;

double slack(double scale) { return kValueTolerance * std::max(1.0, std::abs(scale)); }

}  // namespace

void CheckResult::record(bool ok, const std::string& what) {
  ++checks;
  if (!ok) {
    if (failures == 0) first_failure = what;
    ++failures;
  }
}

bool VerifyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.failures == 0; });
}

VerifyReport verify_elicitation(const Problem& problem, const SimulatedOracle& oracle,
                                const ElicitationConfig& config, std::size_t enumeration_limit) {
  CheckResult greedy{"greedy optimum matches enumeration", 0, 0, {}};
  CheckResult geometry{"region matches brute-force enumeration", 0, 0, {}};
  CheckResult bound{"regret bound dominates exact minimax regret", 0, 0, {}};
  CheckResult monotone{"exact minimax regret is non-increasing", 0, 0, {}};
  CheckResult truth{"hidden weights remain in the region", 0, 0, {}};
  CheckResult stop{"stop condition is sound", 0, 0, {}};

  const bool enumerate = problem.matroid.size() <= enumeration_limit;
  std::vector<Base> all_bases;
  if (enumerate) all_bases = enumerate_bases(problem.matroid);

  ElicitationState state(problem, config);
  double previous_exact = std::numeric_limits<double>::infinity();
  const auto truth_sigma = lambda_to_sigma(oracle.truth());

  while (true) {
    const auto query = state.advance();
    const auto r = std::to_string(state.iteration());
    const auto& region = state.polytope();
    const auto& scenarios = state.vertex_solutions();

    truth.record(region.contains(truth_sigma.coords, 1e-7), "iteration " + r);

    const auto& hs = region.halfspaces();
    if (region.dimension() <= 6 && hs.size() <= 30) {
      std::string diff;
      const bool same = same_geometry(region, brute_force_vertex_enum(hs, region.dimension()), 1e-7, &diff);
      geometry.record(same, "iteration " + r + ": " + diff);
    }

    if (enumerate) {
      for (std::size_t v = 0; v < scenarios.size(); ++v) {
        const auto& s = scenarios[v];
        double best = problem.sense == Sense::Max ? -std::numeric_limits<double>::infinity()
                                                  : std::numeric_limits<double>::infinity();
        for (const auto& b : all_bases) {
          const double w = base_weight(s.weights, b);
          best = problem.sense == Sense::Max ? std::max(best, w) : std::min(best, w);
        }
        greedy.record(std::abs(best - s.optimal_value) <= slack(best),
                      "iteration " + r + " vertex " + std::to_string(v));
      }
      const auto exact = exact_mmr(problem, std::span<const Scenario>(scenarios));
      bound.record(state.mmr_bound() >= exact.value - slack(exact.value), "iteration " + r);
      monotone.record(exact.value <= previous_exact + slack(exact.value), "iteration " + r);
      previous_exact = exact.value;

      if (state.status() == Status::UniformOptimal) {
        stop.record(exact.value <= slack(0.0), "uniform stop with exact regret " + std::to_string(exact.value));
      } else if (state.status() == Status::BoundBelowTau) {
        stop.record(exact.value <= config.tau + slack(config.tau), "tau stop at iteration " + r);
      }
    }
    if (state.status() == Status::UniformOptimal) {
      const auto mr = max_regret(problem.sense, state.recommended_base(), scenarios);
      stop.record(mr.value <= slack(0.0), "uniform stop base has regret " + std::to_string(mr.value));
    }

    if (!query) break;
    state.apply_answer(*query, oracle.answer(query->l, query->k));
    if (state.status() == Status::Contradiction) break;
  }

  VerifyReport report;
  report.run = make_report(state);
  report.checks = {greedy, geometry, bound, monotone, truth, stop};
  return report;
}

}  // namespace elicit
