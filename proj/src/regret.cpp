#include "elicit/regret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "elicit/errors.hpp"

namespace elicit {

void Problem::validate() const {
  if (attributes.rows() != matroid.size()) {
    throw InputError("attribute matrix has " + std::to_string(attributes.rows()) +
                     " rows but the matroid has " + std::to_string(matroid.size()) + " elements");
  }
}

Scenario make_scenario(const Problem& problem, const SigmaPoint& sigma) {
  Scenario s;
  s.sigma = sigma;
  s.lambda = sigma_to_lambda(sigma);
  s.weights = realize_weights(problem.attributes, s.lambda);
  auto best = greedy_opt_base(problem.matroid, s.weights, problem.sense);
  s.optimal_base = std::move(best.base);
  s.optimal_value = best.value;
  return s;
}

double regret_unchecked(Sense sense, const Base& base, const Scenario& scenario) {
  const double w = base_weight(scenario.weights, base);
  const double gap = sense == Sense::Min ? w - scenario.optimal_value : scenario.optimal_value - w;
  return std::max(gap, 0.0);
}

double regret(const Problem& problem, const Base& base, const Scenario& scenario) {
  if (!problem.matroid.is_base(base)) throw InputError("regret requires a base of the matroid");
  return regret_unchecked(problem.sense, base, scenario);
}

MaxRegret max_regret(Sense sense, const Base& base, std::span<const Scenario> vertex_scenarios) {
  MaxRegret worst{-1.0, 0};
  for (std::size_t i = 0; i < vertex_scenarios.size(); ++i) {
    const double r = regret_unchecked(sense, base, vertex_scenarios[i]);
    if (r > worst.value) worst = {r, i};
  }
  worst.value = std::max(worst.value, 0.0);
  return worst;
}

MaxRegret max_regret(const Problem& problem, const Base& base, const UncertaintyPolytope& region) {
  if (!problem.matroid.is_base(base)) throw InputError("max_regret requires a base of the matroid");
  std::vector<Scenario> scenarios;
  scenarios.reserve(region.vertices().size());
  for (const auto& v : region.vertices()) scenarios.push_back(make_scenario(problem, v.point));
  return max_regret(problem.sense, base, scenarios);
}

MinimaxRegret exact_mmr(const Problem& problem, std::span<const Scenario> vertex_scenarios,
                        std::size_t cap) {
  const auto bases = enumerate_bases(problem.matroid, cap);
  MinimaxRegret best{std::numeric_limits<double>::infinity(), {}};
  // enumerate_bases yields lexicographic order, so strict < keeps the first.
  for (const auto& b : bases) {
    const double value = max_regret(problem.sense, b, vertex_scenarios).value;
    if (value < best.value) best = {value, b};
  }
  return best;
}

MinimaxRegret exact_mmr(const Problem& problem, const UncertaintyPolytope& region,
                        std::size_t cap) {
  std::vector<Scenario> scenarios;
  scenarios.reserve(region.vertices().size());
  for (const auto& v : region.vertices()) scenarios.push_back(make_scenario(problem, v.point));
  return exact_mmr(problem, scenarios, cap);
}

SimulatedOracle::SimulatedOracle(const AttributeMatrix& attributes, LambdaPoint truth)
    : truth_(std::move(truth)) {
  double total = 0.0;
  for (double x : truth_.weights) {
    if (x < -kEpsilon || x > 1.0 + kEpsilon) throw DomainError("oracle lambda outside [0, 1]");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-6) throw DomainError("oracle lambda does not sum to one");
  weights_ = realize_weights(attributes, truth_);
}

SimulatedOracle SimulatedOracle::from_seed(const AttributeMatrix& attributes, std::uint64_t seed) {
  return SimulatedOracle(attributes, sample_simplex(attributes.cols(), seed));
}

Answer SimulatedOracle::answer(Element l, Element k) const {
  if (l == k) throw PreconditionError("preference query needs two distinct elements");
  if (l >= weights_.size() || k >= weights_.size()) throw InputError("query element out of range");
  return weights_[l] >= weights_[k] ? Answer::PrefersL : Answer::PrefersK;
}

LambdaPoint sample_simplex(std::size_t p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  LambdaPoint lambda;
  lambda.weights.resize(p);
  double total = 0.0;
  for (auto& x : lambda.weights) total += (x = expo(rng));
  for (auto& x : lambda.weights) x /= total;
  return lambda;
}

}  // namespace elicit
