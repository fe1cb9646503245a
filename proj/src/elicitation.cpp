#include "elicit/elicitation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "elicit/errors.hpp"

namespace elicit {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Running: return "Running";
    case Status::UniformOptimal: return "UniformOptimal";
    case Status::BoundBelowTau: return "BoundBelowTau";
    case Status::Contradiction: return "Contradiction";
    case Status::MaxIterations: return "MaxIterations";
  }
  return "Unknown";
}

bool is_terminal(Status status) { return status != Status::Running; }

bool is_optimal_at(const Base& base, const Scenario& scenario) {
  const double w = base_weight(scenario.weights, base);
  return std::abs(w - scenario.optimal_value) <= kEpsilon * std::max(1.0, std::abs(scenario.optimal_value));
}

std::vector<Base> collect_base_pool(std::span<const Scenario> scenarios) {
  std::vector<Base> pool;
  pool.reserve(scenarios.size());
  for (const auto& s : scenarios) pool.push_back(s.optimal_base);
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  return pool;
}

std::optional<Base> find_uniformly_optimal(std::span<const Base> pool,
                                           std::span<const Scenario> scenarios) {
  for (const auto& b : pool) {
    if (std::all_of(scenarios.begin(), scenarios.end(),
                    [&](const Scenario& s) { return is_optimal_at(b, s); })) {
      return b;
    }
  }
  return std::nullopt;
}

DisparityTable compute_disparity(std::span<const Base> pool, std::span<const Scenario> scenarios,
                                 DisparityRule rule) {
  DisparityTable table;
  const std::size_t m = pool.size();
  if (m < 2) return table;

  std::vector<std::vector<bool>> disparate(m, std::vector<bool>(m, rule == DisparityRule::AllPairs));
  if (rule == DisparityRule::Unsettled) {
    // owner[s]: pool index of the base recorded at s; optimal[s]: pool bases optimal at s.
    std::vector<std::size_t> owner(scenarios.size());
    std::vector<TightSet> optimal(scenarios.size(), TightSet(m));
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      owner[s] = static_cast<std::size_t>(
          std::find(pool.begin(), pool.end(), scenarios[s].optimal_base) - pool.begin());
      for (std::size_t b = 0; b < m; ++b) {
        if (b == owner[s] || is_optimal_at(pool[b], scenarios[s])) optimal[s].set(b);
      }
    }
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      for (std::size_t t = s + 1; t < scenarios.size(); ++t) {
        const auto a = owner[s];
        const auto b = owner[t];
        if (a == b || a >= m || b >= m || disparate[a][b]) continue;
        if (optimal[s].intersection_count(optimal[t]) == 0) disparate[a][b] = disparate[b][a] = true;
      }
    }
  }

  std::vector<Element> only_u;
  std::vector<Element> only_v;
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = u + 1; v < m; ++v) {
      if (!disparate[u][v]) continue;
      only_u.clear();
      only_v.clear();
      std::set_difference(pool[u].begin(), pool[u].end(), pool[v].begin(), pool[v].end(),
                          std::back_inserter(only_u));
      std::set_difference(pool[v].begin(), pool[v].end(), pool[u].begin(), pool[u].end(),
                          std::back_inserter(only_v));
      for (Element l : only_u) {
        for (Element k : only_v) ++table[{std::min(l, k), std::max(l, k)}];
      }
    }
  }
  return table;
}

RegretBound pool_regret_bound(Sense sense, std::span<const Base> pool,
                              std::span<const Scenario> scenarios) {
  RegretBound best{std::numeric_limits<double>::infinity(), {}};
  for (const auto& b : pool) {
    const double value = max_regret(sense, b, scenarios).value;
    if (value < best.value) best = {value, b};
  }
  return best;
}

bool separates(const UncertaintyPolytope& region, const Halfspace& h) {
  bool above = false;
  bool below = false;
  for (const auto& v : region.vertices()) {
    const double g = h.evaluate(v.point.coords);
    above = above || g > kEpsilon;
    below = below || g < -kEpsilon;
    if (above && below) return true;
  }
  return false;
}

std::optional<Query> choose_query(const DisparityTable& table, const UncertaintyPolytope& region,
                                  const AttributeMatrix& attributes,
                                  std::span<const QueryRecord> history) {
  std::set<ElementPair> asked;
  for (const auto& h : history) asked.insert({h.query.l, h.query.k});

  std::vector<std::pair<std::size_t, ElementPair>> ranked;
  ranked.reserve(table.size());
  for (const auto& [pair, count] : table) ranked.emplace_back(count, pair);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  for (const auto& [count, pair] : ranked) {
    if (asked.contains(pair)) continue;
    const auto c = preference_halfspace(attributes, pair.first, pair.second);
    if (separates(region, c.halfspace)) return Query{pair.first, pair.second};
  }
  return std::nullopt;
}

ElicitationState::ElicitationState(Problem problem, ElicitationConfig config)
    : problem_(std::move(problem)),
      config_(config),
      polytope_(UncertaintyPolytope::initial_simplex(problem_.attributes.cols())),
      started_(std::chrono::steady_clock::now()) {
  problem_.validate();
  if (!(config_.tau >= 0.0)) throw InputError("tau must be >= 0");
  if (config_.max_iterations < 1) throw InputError("max_iterations must be >= 1");
}

void ElicitationState::solve_at_vertices() {
  std::map<std::vector<double>, Scenario> next;
  vertex_solutions_.clear();
  vertex_solutions_.reserve(polytope_.vertices().size());
  for (const auto& v : polytope_.vertices()) {
    auto hit = cache_.find(v.point.coords);
    if (hit == cache_.end()) {
      vertex_solutions_.push_back(make_scenario(problem_, v.point));
      ++greedy_solves_;
    } else {
      vertex_solutions_.push_back(hit->second);
    }
    next.emplace(v.point.coords, vertex_solutions_.back());
  }
  cache_ = std::move(next);
  base_pool_ = collect_base_pool(vertex_solutions_);
  solved_ = true;
}

std::optional<Base> ElicitationState::uniformly_optimal_check() const {
  return find_uniformly_optimal(base_pool_, vertex_solutions_);
}

DisparityTable ElicitationState::disparity_table() const {
  return compute_disparity(base_pool_, vertex_solutions_);
}

std::optional<Query> ElicitationState::select_query() const {
  if (auto q = choose_query(disparity_table(), polytope_, problem_.attributes, history_)) return q;
  return choose_query(compute_disparity(base_pool_, vertex_solutions_, DisparityRule::AllPairs),
                      polytope_, problem_.attributes, history_);
}

double ElicitationState::mmr_upper_bound() {
  auto bound = pool_regret_bound(problem_.sense, base_pool_, vertex_solutions_);
  mmr_bound_ = bound.value;
  best_base_ = std::move(bound.base);
  return mmr_bound_;
}

std::optional<Query> ElicitationState::advance() {
  if (is_terminal(status_)) return std::nullopt;
  if (pending_) return pending_;

  solve_at_vertices();
  mmr_upper_bound();
  const auto table = disparity_table();
  const auto uniform = uniformly_optimal_check();

  IterationRecord record;
  record.iteration = iteration_;
  record.vertex_count = polytope_.vertices().size();
  record.pool_size = base_pool_.size();
  record.disparity_count = table.size();
  record.mmr_bound = mmr_bound_;

  if (uniform) {
    status_ = Status::UniformOptimal;
    best_base_ = *uniform;
  } else if (mmr_bound_ <= config_.tau) {
    status_ = Status::BoundBelowTau;
  } else if (history_.size() >= config_.max_iterations) {
    status_ = Status::MaxIterations;
    note_ = "query budget exhausted";
  } else {
    pending_ = choose_query(table, polytope_, problem_.attributes, history_);
    if (!pending_) {
      // Every unsettled pair is already implied; widen to all pooled bases.
      pending_ = choose_query(compute_disparity(base_pool_, vertex_solutions_, DisparityRule::AllPairs),
                              polytope_, problem_.attributes, history_);
    }
    if (!pending_) {
      status_ = Status::MaxIterations;
      note_ = "no disparity pair splits the region";
    }
  }
  record.query = pending_;
  record.status = status_;
  record.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started_).count();
  trace_.push_back(record);
  return pending_;
}

void ElicitationState::apply_answer(Query query, Answer answer) {
  if (is_terminal(status_)) throw PreconditionError("session has already stopped");
  if (!pending_ || !(*pending_ == query)) {
    throw PreconditionError("answer does not match the pending query");
  }
  const Element preferred = answer == Answer::PrefersL ? query.l : query.k;
  const Element other = answer == Answer::PrefersL ? query.k : query.l;
  auto constraint = preference_halfspace(problem_.attributes, preferred, other);

  QueryRecord record{query, answer, constraint, iteration_, CutOutcome::Refined};
  try {
    auto result = cut(polytope_, constraint.halfspace);
    polytope_ = std::move(result.polytope);
    record.outcome = result.outcome;
  } catch (const ContradictionError& e) {
    history_.push_back(std::move(record));
    pending_.reset();
    status_ = Status::Contradiction;
    note_ = e.what();
    return;
  }
  history_.push_back(std::move(record));
  pending_.reset();
  ++iteration_;
  solved_ = false;
}

ElicitationReport make_report(const ElicitationState& state, bool aborted) {
  ElicitationReport report;
  report.status = state.status();
  report.base = state.recommended_base();
  report.mmr_bound = state.mmr_bound();
  report.queries = state.history().size();
  report.iterations = state.trace().size();
  report.aborted = aborted;
  report.note = aborted ? "aborted before termination" : state.note();
  report.trace = state.trace();
  report.history = state.history();
  return report;
}

ElicitationReport run(const Problem& problem, const AnswerSource& answers,
                      const ElicitationConfig& config) {
  ElicitationState state(problem, config);
  while (auto query = state.advance()) {
    auto answer = answers(state, *query);
    if (!answer) return make_report(state, true);
    state.apply_answer(*query, *answer);
  }
  return make_report(state);
}

ElicitationReport run(const Problem& problem, const SimulatedOracle& oracle,
                      const ElicitationConfig& config) {
  return run(
      problem,
      [&](const ElicitationState&, Query q) -> std::optional<Answer> { return oracle.answer(q.l, q.k); },
      config);
}

}  // namespace elicit
