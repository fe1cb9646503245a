#include "elicit/batch.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "elicit/errors.hpp"

namespace elicit {

std::uint64_t oracle_seed(std::uint64_t seed) {
  // splitmix64 step so oracle and instance streams differ.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RunOutcome execute_run(const Problem& problem, const SimulatedOracle& oracle,
                       const RunOptions& options) {
  RunOutcome out;
  out.row.kind = problem.matroid.kind();
  out.row.n = problem.matroid.size();
  out.row.p = problem.p();
  const auto start = std::chrono::steady_clock::now();
  try {
    ElicitationConfig config{options.tau, options.max_iterations};
    if (options.tau_fraction) {
      ElicitationState probe(problem, {0.0, options.max_iterations});
      probe.advance();
      config.tau = *options.tau_fraction * probe.trace().front().mmr_bound;
    }
    const auto report = run(problem, oracle, config);
    out.row.queries = report.queries;
    out.row.iterations = report.iterations;
    out.row.status = std::string(to_string(report.status));
    out.row.initial_bound = report.trace.empty() ? 0.0 : report.trace.front().mmr_bound;
    out.row.final_bound = report.mmr_bound;
    out.row.tau = config.tau;
    out.trace = report.trace;
  } catch (const std::exception& e) {
    out.row.status = "Error";
    out.row.error = e.what();
  }
  out.row.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RunOutcome execute_run(const GeneratorSpec& spec, const RunOptions& options) {
  RunOutcome out;
  try {
    const auto doc = generate_instance(spec);
    const auto problem = doc.problem(options.sense);
    const auto oracle = SimulatedOracle::from_seed(problem.attributes, oracle_seed(spec.seed));
    out = execute_run(problem, oracle, options);
  } catch (const std::exception& e) {
    out.row.status = "Error";
    out.row.error = e.what();
  }
  out.row.kind = spec.kind;
  out.row.n = spec.n;
  out.row.p = spec.p;
  out.row.seed = spec.seed;
  return out;
}

std::vector<RunOutcome> run_batch(const ExperimentBatch& batch, const RunOptions& options,
                                  std::size_t workers) {
  if (batch.repetitions < 1) throw InputError("batch needs at least one repetition");
  std::vector<GeneratorSpec> cells;
  for (auto kind : batch.kinds) {
    for (auto n : batch.sizes) {
      for (auto p : batch.columns) {
        for (std::size_t rep = 0; rep < batch.repetitions; ++rep) {
          cells.push_back({kind, n, p, batch.base_seed + rep, 1, 9});
        }
      }
    }
  }
  std::vector<RunOutcome> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) results[i] = execute_run(cells[i], options);
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, cells.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return results;
}

std::string rows_to_csv(const std::vector<RunOutcome>& outcomes, bool timing) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << "kind,n,p,seed,queries,iterations,wall_ms,status,initial_bound,tau,final_bound,error\n";
  for (const auto& o : outcomes) {
    const auto& r = o.row;
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    out << to_string(r.kind) << ',' << r.n << ',' << r.p << ',' << r.seed << ',' << r.queries << ','
        << r.iterations << ',' << (timing ? r.wall_ms : 0.0) << ',' << r.status << ','
        << r.initial_bound << ',' << r.tau << ',' << r.final_bound << ',' << error << '\n';
  }
  return out.str();
}

std::string trace_to_csv(const std::vector<IterationRecord>& trace, bool timing) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << "iteration,vertices,pool,disparity,mmr_bound,elapsed_ms,query_l,query_k,status\n";
  for (const auto& t : trace) {
    out << t.iteration << ',' << t.vertex_count << ',' << t.pool_size << ',' << t.disparity_count
        << ',' << t.mmr_bound << ',' << (timing ? t.elapsed_ms : 0.0) << ',';
    if (t.query) {
      out << t.query->l + 1 << ',' << t.query->k + 1;
    } else {
      out << ',';
    }
    out << ',' << to_string(t.status) << '\n';
  }
  return out.str();
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace elicit
