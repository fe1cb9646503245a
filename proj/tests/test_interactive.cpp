#include <sstream>

#include "doctest.h"
#include "elicit/instance_io.hpp"
#include "elicit/interactive.hpp"

using namespace elicit;

TEST_CASE("two scripted answers leave a region with 7 vertices") {
  std::istringstream in("4\n6\n");
  std::ostringstream out;
  const auto report = interactive_session(toy_scheduling_instance().problem(), {}, in, out);
  CHECK(report.aborted);
  CHECK(report.queries == 2);
  CHECK(report.trace.back().vertex_count == 7);
  const auto text = out.str();
  CHECK(text.find("Do you prefer element 4 or element 5?") != std::string::npos);
  CHECK(text.find("Do you prefer element 5 or element 6?") != std::string::npos);
  CHECK(text.find("region: 7 vertices") != std::string::npos);
}

TEST_CASE("immediate EOF aborts with no queries") {
  std::istringstream in("");
  std::ostringstream out;
  const auto report = interactive_session(toy_scheduling_instance().problem(), {}, in, out);
  CHECK(report.aborted);
  CHECK(report.queries == 0);
  CHECK(out.str().find("best base so far") != std::string::npos);
}

TEST_CASE("malformed input is re-prompted") {
  std::istringstream in("maybe\n\n  l  \n");
  std::ostringstream out;
  const auto report = interactive_session(toy_scheduling_instance().problem(), {}, in, out);
  CHECK(report.queries == 1);
  CHECK(report.history[0].answer == Answer::PrefersL);
  std::size_t prompts = 0;
  for (auto pos = out.str().find("Do you prefer element 4"); pos != std::string::npos;
       pos = out.str().find("Do you prefer element 4", pos + 1)) {
    ++prompts;
  }
  CHECK(prompts == 3);
  CHECK(out.str().find("please answer") != std::string::npos);
}

TEST_CASE("answers from a hidden weight vector reproduce the simulated run") {
  const auto problem = toy_scheduling_instance().problem();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto o = SimulatedOracle::from_seed(problem.attributes, seed);
    const auto simulated = run(problem, o);
    std::string script;
    for (const auto& h : simulated.history) script += h.answer == Answer::PrefersL ? "l\n" : "k\n";
    std::istringstream in(script);
    std::ostringstream out;
    const auto typed = interactive_session(problem, {}, in, out);
    CHECK_FALSE(typed.aborted);
    CHECK(typed.status == simulated.status);
    CHECK(typed.base == simulated.base);
    CHECK(typed.queries == simulated.queries);
  }
}
