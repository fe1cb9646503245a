#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"

#include "elicit/batch.hpp"
#include "elicit/errors.hpp"
#include "elicit/generator.hpp"
#include "elicit/instance_io.hpp"
#include "elicit/interactive.hpp"
#include "elicit/service.hpp"
#include "elicit/verify.hpp"

namespace {

using namespace elicit;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitContradiction = 3;
constexpr int kExitIterationCap = 4;

struct InstanceOptions {
  bool toy = false;
  std::string path;
  std::string kind = "scheduling";
  std::size_t n = 10;
  std::size_t p = 4;
  std::uint64_t seed = 1;
  int y_min = 1;
  int y_max = 9;
};

struct SolveOptions {
  double tau = 0.0;
  std::string sense;
  std::size_t max_iters = 500;
};

void add_instance_flags(CLI::App& cmd, InstanceOptions& o, bool allow_generate) {
  auto* toy = cmd.add_flag("--toy", o.toy, "use the built-in eight-job scheduling instance");
  auto* inst = cmd.add_option("--instance", o.path, "instance JSON file")->check(CLI::ExistingFile);
  toy->excludes(inst);
  if (allow_generate) {
    cmd.add_option("--kind", o.kind, "generated instance kind")
        ->check(CLI::IsMember({"uniform", "graphic", "scheduling", "partition"}));
    cmd.add_option("--n", o.n, "generated instance size");
    cmd.add_option("--p", o.p, "generated attribute count");
    cmd.add_option("--seed", o.seed, "generator seed");
  }
}

void add_solve_flags(CLI::App& cmd, SolveOptions& o) {
  cmd.add_option("--tau", o.tau, "stop once the regret bound is at most tau")->check(CLI::NonNegativeNumber);
  cmd.add_option("--sense", o.sense, "optimisation sense (overrides the instance)")
      ->check(CLI::IsMember({"min", "max"}));
  cmd.add_option("--max-iters", o.max_iters, "iteration cap")->check(CLI::PositiveNumber);
}

InstanceDocument resolve_instance(const InstanceOptions& o, bool allow_generate) {
  if (o.toy) return toy_scheduling_instance();
  if (!o.path.empty()) return load_instance(o.path);
  if (!allow_generate) throw InputError("one of --toy or --instance is required");
  return generate_instance({parse_matroid_kind(o.kind), o.n, o.p, o.seed, o.y_min, o.y_max});
}

Problem resolve_problem(const InstanceDocument& doc, const SolveOptions& s) {
  if (!s.sense.empty()) return doc.problem(parse_sense(s.sense));
  return doc.problem(doc.sense.value_or(Sense::Max));
}

LambdaPoint parse_lambda(const std::string& text, std::size_t p) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InputError("--lambda entry '" + item + "' is not a number");
    }
  }
  if (values.size() != p) {
    throw InputError("--lambda needs " + std::to_string(p) + " entries, got " + std::to_string(values.size()));
  }
  double total = 0.0;
  for (double v : values) {
    if (!(v >= 0.0)) throw InputError("--lambda entries must be nonnegative");
    total += v;
  }
  if (!(total > 0.0)) throw InputError("--lambda entries must not all be zero");
  for (double& v : values) v /= total;
  return LambdaPoint{values};
}

std::string format_base(const Base& base) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < base.size(); ++i) out << (i ? ", " : "") << base[i] + 1;
  out << '}';
  return out.str();
}

json report_to_json(const ElicitationReport& report, const Problem& problem) {
  json base = json::array();
  for (auto e : report.base) base.push_back(e + 1);
  return json{{"status", std::string(to_string(report.status))},
              {"base", base},
              {"mmr_bound", report.mmr_bound},
              {"queries", report.queries},
              {"iterations", report.iterations},
              {"aborted", report.aborted},
              {"note", report.note},
              {"sense", std::string(to_string(problem.sense))},
              {"trace", service::trace_to_json(report.trace)},
              {"history", service::history_to_json(report.history)}};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

int exit_code_for(Status status) {
  switch (status) {
    case Status::Contradiction:
      return kExitContradiction;
    case Status::MaxIterations:
      return kExitIterationCap;
    default:
      return kExitOk;
  }
}

void print_summary(std::ostream& out, const ElicitationReport& report) {
  out << "status: " << to_string(report.status) << (report.aborted ? " (aborted)" : "") << '\n'
      << "queries: " << report.queries << '\n'
      << "iterations: " << report.iterations << '\n'
      << "regret bound: " << report.mmr_bound << '\n'
      << "recommended base: " << format_base(report.base) << '\n';
  if (!report.note.empty()) out << "note: " << report.note << '\n';
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text, const std::string& flag) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) {
    const auto dots = item.find("..");
    try {
      if (dots == std::string::npos) {
        out.push_back(std::stoul(item));
        continue;
      }
      // a..b or a..b:step
      const auto colon = item.find(':', dots);
      const std::size_t lo = std::stoul(item.substr(0, dots));
      const std::size_t hi = std::stoul(item.substr(dots + 2, colon == std::string::npos ? std::string::npos
                                                                                           : colon - dots - 2));
      const std::size_t step = colon == std::string::npos ? 1 : std::stoul(item.substr(colon + 1));
      if (step == 0 || hi < lo) throw InputError("bad range");
      for (std::size_t v = lo; v <= hi; v += step) out.push_back(v);
    } catch (const std::exception&) {
      throw InputError(flag + " entry '" + item + "' is not a size or range");
    }
  }
  if (out.empty()) throw InputError(flag + " is empty");
  return out;
}

httplib::Server* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive minimax-regret elicitation over matroids"};
  app.require_subcommand(1);

  // gen
  InstanceOptions gen_opts;
  std::string gen_out;
  std::string gen_sense;
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--kind", gen_opts.kind, "matroid kind")
      ->check(CLI::IsMember({"uniform", "graphic", "scheduling", "partition"}));
  gen->add_option("--n", gen_opts.n, "number of elements");
  gen->add_option("--p", gen_opts.p, "number of attributes");
  gen->add_option("--seed", gen_opts.seed, "seed");
  gen->add_option("--y-min", gen_opts.y_min, "smallest attribute value");
  gen->add_option("--y-max", gen_opts.y_max, "largest attribute value");
  gen->add_option("--sense", gen_sense, "sense stored in the file")->check(CLI::IsMember({"min", "max"}));
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // run
  InstanceOptions run_inst;
  SolveOptions run_solve;
  std::string run_lambda;
  std::optional<std::uint64_t> run_oracle_seed;
  std::string run_answers;
  std::string run_out;
  std::string run_trace;
  bool run_no_timing = false;
  auto* run_cmd = app.add_subcommand("run", "elicit against a simulated or scripted decision maker");
  add_instance_flags(*run_cmd, run_inst, true);
  add_solve_flags(*run_cmd, run_solve);
  auto* lambda_opt = run_cmd->add_option("--lambda", run_lambda, "hidden attribute weights, comma separated");
  auto* oseed_opt = run_cmd->add_option("--oracle-seed", run_oracle_seed, "seed for random hidden weights");
  auto* answers_opt =
      run_cmd->add_option("--answers", run_answers, "file of scripted answers ('l', 'k' or element number per line)")
          ->check(CLI::ExistingFile);
  lambda_opt->excludes(oseed_opt)->excludes(answers_opt);
  oseed_opt->excludes(answers_opt);
  run_cmd->add_option("--out", run_out, "write the JSON report here");
  run_cmd->add_option("--trace-out", run_trace, "write the per-iteration trace CSV here");
  run_cmd->add_flag("--no-timing", run_no_timing, "write timing columns as 0");

  // batch
  std::string batch_kinds = "scheduling";
  std::string batch_n = "10..50:10";
  std::string batch_p = "4,6,8";
  std::size_t batch_reps = 20;
  std::uint64_t batch_seed = 1;
  std::size_t batch_jobs = 1;
  double batch_tau = 0.0;
  std::optional<double> batch_tau_frac;
  std::string batch_sense = "max";
  std::size_t batch_max_iters = 500;
  std::string batch_out;
  std::string batch_trace_dir;
  bool batch_no_timing = false;
  auto* batch = app.add_subcommand("batch", "grid of simulated runs, one CSV row per run");
  batch->add_option("--kinds", batch_kinds, "comma separated kinds");
  batch->add_option("--n", batch_n, "sizes, e.g. 10,20 or 10..50:10");
  batch->add_option("--p", batch_p, "attribute counts, same syntax as --n");
  batch->add_option("--reps", batch_reps, "repetitions per cell")->check(CLI::PositiveNumber);
  batch->add_option("--seed", batch_seed, "first seed; repetition r uses seed + r");
  batch->add_option("--jobs", batch_jobs, "worker threads")->check(CLI::PositiveNumber);
  auto* tau_opt = batch->add_option("--tau", batch_tau, "absolute tau")->check(CLI::NonNegativeNumber);
  batch->add_option("--tau-frac", batch_tau_frac, "tau as a fraction of each run's initial bound")
      ->check(CLI::NonNegativeNumber)
      ->excludes(tau_opt);
  batch->add_option("--sense", batch_sense, "optimisation sense")->check(CLI::IsMember({"min", "max"}));
  batch->add_option("--max-iters", batch_max_iters, "iteration cap")->check(CLI::PositiveNumber);
  batch->add_option("--out", batch_out, "rows CSV (default stdout)");
  batch->add_option("--trace-dir", batch_trace_dir, "directory for per-run trace CSVs");
  batch->add_flag("--no-timing", batch_no_timing, "write timing columns as 0");

  // interactive
  InstanceOptions int_inst;
  SolveOptions int_solve;
  std::string int_answers;
  auto* inter = app.add_subcommand("interactive", "answer queries at the terminal");
  add_instance_flags(*inter, int_inst, false);
  add_solve_flags(*inter, int_solve);
  inter->add_option("--answers", int_answers, "read answers from this file instead of stdin")
      ->check(CLI::ExistingFile);

  // serve
  std::string serve_host = "127.0.0.1";
  int serve_port = 8080;
  std::string serve_journal;
  std::string serve_cors = "*";
  auto* serve = app.add_subcommand("serve", "run the HTTP session service");
  serve->add_option("--host", serve_host, "bind address");
  serve->add_option("--port", serve_port, "port")->check(CLI::Range(0, 65535));
  serve->add_option("--journal", serve_journal, "append-only session journal");
  serve->add_option("--cors-origin", serve_cors, "allowed CORS origin");

  // verify
  InstanceOptions ver_inst;
  SolveOptions ver_solve;
  std::uint64_t ver_oracle_seed = 1;
  std::size_t ver_runs = 1;
  auto* verify = app.add_subcommand("verify", "cross-check a run against brute-force oracles");
  add_instance_flags(*verify, ver_inst, true);
  add_solve_flags(*verify, ver_solve);
  verify->add_option("--oracle-seed", ver_oracle_seed, "seed for the hidden weights of the first run");
  verify->add_option("--runs", ver_runs, "number of hidden-weight draws")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*gen) {
      auto doc = generate_instance(
          {parse_matroid_kind(gen_opts.kind), gen_opts.n, gen_opts.p, gen_opts.seed, gen_opts.y_min, gen_opts.y_max});
      if (!gen_sense.empty()) doc.sense = parse_sense(gen_sense);
      write_text(gen_out, instance_to_json(doc).dump(2) + "\n");
      return kExitOk;
    }

    if (*run_cmd) {
      const auto doc = resolve_instance(run_inst, true);
      const auto problem = resolve_problem(doc, run_solve);
      const ElicitationConfig config{run_solve.tau, run_solve.max_iters};
      ElicitationReport report;
      if (!run_answers.empty()) {
        std::ifstream in(run_answers);
        std::ostringstream discard;
        report = interactive_session(problem, config, in, discard);
      } else {
        const auto oracle = !run_lambda.empty()
                                ? SimulatedOracle(problem.attributes, parse_lambda(run_lambda, problem.p()))
                                : SimulatedOracle::from_seed(problem.attributes, run_oracle_seed.value_or(1));
        report = run(problem, oracle, config);
      }
      print_summary(std::cout, report);
      if (!run_out.empty()) write_text(run_out, report_to_json(report, problem).dump(2) + "\n");
      if (!run_trace.empty()) write_text(run_trace, trace_to_csv(report.trace, !run_no_timing));
      return exit_code_for(report.status);
    }

    if (*batch) {
      ExperimentBatch grid;
      for (const auto& k : split_list(batch_kinds)) grid.kinds.push_back(parse_matroid_kind(k));
      if (grid.kinds.empty()) throw InputError("--kinds is empty");
      grid.sizes = parse_sizes(batch_n, "--n");
      grid.columns = parse_sizes(batch_p, "--p");
      grid.repetitions = batch_reps;
      grid.base_seed = batch_seed;
      RunOptions options{batch_tau, batch_tau_frac, parse_sense(batch_sense), batch_max_iters};
      const auto outcomes = run_batch(grid, options, batch_jobs);
      write_text(batch_out, rows_to_csv(outcomes, !batch_no_timing));
      if (!batch_trace_dir.empty()) {
        std::filesystem::create_directories(batch_trace_dir);
        for (const auto& o : outcomes) {
          std::ostringstream name;
          name << to_string(o.row.kind) << "_n" << o.row.n << "_p" << o.row.p << "_s" << o.row.seed << ".csv";
          write_text((std::filesystem::path(batch_trace_dir) / name.str()).string(),
                     trace_to_csv(o.trace, !batch_no_timing));
        }
      }
      if (!batch_out.empty()) {
        std::map<std::tuple<std::string, std::size_t, std::size_t>, std::vector<double>> cells;
        std::size_t errors = 0;
        for (const auto& o : outcomes) {
          if (o.row.status == "Error") ++errors;
          cells[{std::string(to_string(o.row.kind)), o.row.n, o.row.p}].push_back(
              static_cast<double>(o.row.queries));
        }
        for (const auto& [key, queries] : cells) {
          std::cout << std::get<0>(key) << " n=" << std::get<1>(key) << " p=" << std::get<2>(key)
                    << " median queries " << median(queries) << '\n';
        }
        if (errors) std::cout << errors << " runs failed\n";
      }
      return kExitOk;
    }

    if (*inter) {
      const auto doc = resolve_instance(int_inst, false);
      const auto problem = resolve_problem(doc, int_solve);
      const ElicitationConfig config{int_solve.tau, int_solve.max_iters};
      ElicitationReport report;
      if (!int_answers.empty()) {
        std::ifstream in(int_answers);
        report = interactive_session(problem, config, in, std::cout);
      } else {
        report = interactive_session(problem, config, std::cin, std::cout);
      }
      std::cout << '\n';
      print_summary(std::cout, report);
      return exit_code_for(report.status);
    }

    if (*serve) {
      service::SessionStore store(serve_journal.empty() ? std::nullopt
                                                        : std::optional<std::filesystem::path>(serve_journal));
      httplib::Server server;
      service::register_routes(server, store, serve_cors);
      g_server = &server;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      int port = serve_port;
      if (port == 0) {
        port = server.bind_to_any_port(serve_host);
        if (port < 0) throw InputError("cannot bind " + serve_host);
      } else if (!server.bind_to_port(serve_host, port)) {
        throw InputError("cannot bind " + serve_host + ":" + std::to_string(port));
      }
      std::cout << "listening on http://" << serve_host << ':' << port << std::endl;
      server.listen_after_bind();
      return kExitOk;
    }

    if (*verify) {
      const auto doc = resolve_instance(ver_inst, true);
      const auto problem = resolve_problem(doc, ver_solve);
      const ElicitationConfig config{ver_solve.tau, ver_solve.max_iters};
      bool all_ok = true;
      for (std::size_t r = 0; r < ver_runs; ++r) {
        const auto oracle = SimulatedOracle::from_seed(problem.attributes, ver_oracle_seed + r);
        const auto result = verify_elicitation(problem, oracle, config);
        std::cout << "run " << r + 1 << ": " << to_string(result.run.status) << " after "
                  << result.run.queries << " queries\n";
        for (const auto& c : result.checks) {
          std::cout << "  " << (c.failures ? "FAIL" : "ok  ") << ' ' << c.name << " (" << c.checks << " checks";
          if (c.failures) std::cout << ", " << c.failures << " failed; first: " << c.first_failure;
          std::cout << ")\n";
        }
        all_ok = all_ok && result.ok();
      }
      return all_ok ? kExitOk : 1;
    }
  } catch (const ContradictionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitContradiction;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}
