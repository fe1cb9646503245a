#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elicit/polytope.hpp"
#include "elicit/regret.hpp"

namespace elicit {

enum class Status { Running, UniformOptimal, BoundBelowTau, Contradiction, MaxIterations };

std::string_view to_string(Status status);
bool is_terminal(Status status);

/// prefq(l, k) with l < k.
struct Query {
  Element l = 0;
  Element k = 0;
  friend bool operator==(const Query&, const Query&) = default;
};

struct QueryRecord {
  Query query;
  Answer answer = Answer::PrefersL;
  PreferenceConstraint constraint;
  std::size_t iteration = 0;
  CutOutcome outcome = CutOutcome::Refined;
};

/// One row of the per-iteration trace.
struct IterationRecord {
  std::size_t iteration = 0;
  std::size_t vertex_count = 0;
  std::size_t pool_size = 0;
  std::size_t disparity_count = 0;
  double mmr_bound = 0.0;
  double elapsed_ms = 0.0;
  std::optional<Query> query;
  /// Running when `query` was posed, otherwise the stop reason.
  Status status = Status::Running;
};

using ElementPair = std::pair<Element, Element>;  // first < second

/// Disparity pair -> number of base pairs it separates.
using DisparityTable = std::map<ElementPair, std::size_t>;

/// |w(B) - z*| within a relative tolerance at this scenario.
bool is_optimal_at(const Base& base, const Scenario& scenario);

/// Distinct optimal bases of the scenarios, sorted.
std::vector<Base> collect_base_pool(std::span<const Scenario> scenarios);

/// First pool base optimal at every scenario, if any.
std::optional<Base> find_uniformly_optimal(std::span<const Base> pool,
                                           std::span<const Scenario> scenarios);

enum class DisparityRule {
  /// Base pairs recorded at vertices u, v such that no pool base is optimal
  /// at both u and v.
  Unsettled,
  /// Every unordered pair of distinct pool bases.
  AllPairs
};

/// Counts, for each qualifying unordered pair of pool bases (Bu, Bv), every
/// cross pair l in Bu \ Bv, k in Bv \ Bu once.
DisparityTable compute_disparity(std::span<const Base> pool, std::span<const Scenario> scenarios,
                                 DisparityRule rule = DisparityRule::Unsettled);

struct RegretBound {
  double value = 0.0;
  Base base;
};

/// min over pool bases of max over scenarios of regret.
RegretBound pool_regret_bound(Sense sense, std::span<const Base> pool,
                              std::span<const Scenario> scenarios);

/// True when some vertex is strictly on each side of h.
bool separates(const UncertaintyPolytope& region, const Halfspace& h);

/// Most frequent disparity pair not yet asked whose constraint splits the
/// vertex set; ties by lexicographic pair.
std::optional<Query> choose_query(const DisparityTable& table, const UncertaintyPolytope& region,
                                  const AttributeMatrix& attributes,
                                  std::span<const QueryRecord> history);

struct ElicitationConfig {
  double tau = 0.0;
  std::size_t max_iterations = 500;
};

/// State of one elicitation session. `advance()` evaluates the current
/// region and either stops or poses a query; `apply_answer()` cuts the
/// region with the answer.
class ElicitationState {
 public:
  explicit ElicitationState(Problem problem, ElicitationConfig config = {});

  void solve_at_vertices();
  std::optional<Base> uniformly_optimal_check() const;
  DisparityTable disparity_table() const;
  std::optional<Query> select_query() const;
  double mmr_upper_bound();
  void apply_answer(Query query, Answer answer);

  /// Runs one evaluation round. Returns the pending query while Running.
  std::optional<Query> advance();

  const Problem& problem() const { return problem_; }
  const ElicitationConfig& config() const { return config_; }
  std::size_t iteration() const { return iteration_; }
  const UncertaintyPolytope& polytope() const { return polytope_; }
  const std::vector<Scenario>& vertex_solutions() const { return vertex_solutions_; }
  const std::vector<Base>& base_pool() const { return base_pool_; }
  const std::vector<QueryRecord>& history() const { return history_; }
  const std::vector<IterationRecord>& trace() const { return trace_; }
  double mmr_bound() const { return mmr_bound_; }
  const Base& recommended_base() const { return best_base_; }
  Status status() const { return status_; }
  const std::optional<Query>& pending() const { return pending_; }
  const std::string& note() const { return note_; }
  std::size_t greedy_solves() const { return greedy_solves_; }

 private:
  Problem problem_;
  ElicitationConfig config_;
  UncertaintyPolytope polytope_;
  std::size_t iteration_ = 0;
  std::vector<Scenario> vertex_solutions_;
  std::vector<Base> base_pool_;
  std::vector<QueryRecord> history_;
  std::vector<IterationRecord> trace_;
  double mmr_bound_ = 0.0;
  Base best_base_;
  Status status_ = Status::Running;
  std::optional<Query> pending_;
  std::string note_;
  std::map<std::vector<double>, Scenario> cache_;
  std::size_t greedy_solves_ = 0;
  bool solved_ = false;
  std::chrono::steady_clock::time_point started_;
};

struct ElicitationReport {
  Status status = Status::Running;
  Base base;
  double mmr_bound = 0.0;
  std::size_t queries = 0;
  std::size_t iterations = 0;
  bool aborted = false;
  std::string note;
  std::vector<IterationRecord> trace;
  std::vector<QueryRecord> history;
};

ElicitationReport make_report(const ElicitationState& state, bool aborted = false);

/// Answers a query, or returns nullopt to abort the session.
using AnswerSource = std::function<std::optional<Answer>(const ElicitationState&, Query)>;

ElicitationReport run(const Problem& problem, const AnswerSource& answers,
                      const ElicitationConfig& config = {});
ElicitationReport run(const Problem& problem, const SimulatedOracle& oracle,
                      const ElicitationConfig& config = {});

}  // namespace elicit
