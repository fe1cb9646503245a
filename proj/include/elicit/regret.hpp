#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "elicit/matroid.hpp"
#include "elicit/polytope.hpp"
#include "elicit/uncertainty.hpp"

namespace elicit {

/// Everything needed to evaluate a scenario: the matroid, its attribute
/// matrix and the optimisation sense.
struct Problem {
  MatroidInstance matroid;
  AttributeMatrix attributes;
  Sense sense = Sense::Max;

  /// Throws InputError if the matrix row count differs from n.
  void validate() const;
  std::size_t p() const { return attributes.cols(); }
};

/// One realisation of the uncertain weights and its optimal base.
struct Scenario {
  SigmaPoint sigma;
  LambdaPoint lambda;
  WeightVector weights;
  double optimal_value = 0.0;
  Base optimal_base;
};

Scenario make_scenario(const Problem& problem, const SigmaPoint& sigma);

/// Nonnegative gap between B's weight and the scenario optimum. Throws
/// InputError if B is not a base.
double regret(const Problem& problem, const Base& base, const Scenario& scenario);

/// Same as regret() without validating the base.
double regret_unchecked(Sense sense, const Base& base, const Scenario& scenario);

struct MaxRegret {
  double value = 0.0;
  std::size_t worst_vertex = 0;
};

/// Regret is convex in sigma, so its maximum over the region is attained at
/// a vertex.
MaxRegret max_regret(const Problem& problem, const Base& base, const UncertaintyPolytope& region);
MaxRegret max_regret(Sense sense, const Base& base, std::span<const Scenario> vertex_scenarios);

struct MinimaxRegret {
  double value = 0.0;
  Base base;
};

/// Minimum over all bases of max regret; ties go to the lexicographically
/// smallest base. Throws SizeError beyond the enumeration cap.
MinimaxRegret exact_mmr(const Problem& problem, const UncertaintyPolytope& region,
                        std::size_t cap = kDefaultEnumerationCap);
MinimaxRegret exact_mmr(const Problem& problem, std::span<const Scenario> vertex_scenarios,
                        std::size_t cap = kDefaultEnumerationCap);

enum class Answer { PrefersL, PrefersK };

/// Stand-in decision maker answering from hidden true weights.
class SimulatedOracle {
 public:
  SimulatedOracle(const AttributeMatrix& attributes, LambdaPoint truth);
  /// Uniform draw from the simplex (normalised exponentials), seeded.
  static SimulatedOracle from_seed(const AttributeMatrix& attributes, std::uint64_t seed);

  /// PrefersL iff w[l] >= w[k]. Throws PreconditionError if l == k.
  Answer answer(Element l, Element k) const;

  const LambdaPoint& truth() const { return truth_; }
  const WeightVector& weights() const { return weights_; }

 private:
  LambdaPoint truth_;
  WeightVector weights_;
};

LambdaPoint sample_simplex(std::size_t p, std::uint64_t seed);

}  // namespace elicit
