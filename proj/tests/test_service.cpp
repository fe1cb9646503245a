#include <atomic>
#include <filesystem>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "elicit/generator.hpp"
#include "elicit/instance_io.hpp"
#include "elicit/service.hpp"

using namespace elicit;
using elicit::service::SessionStore;
using nlohmann::json;

namespace {

json toy_payload() { return json{{"instance", instance_to_json(toy_scheduling_instance())}}; }

json strip_timing(json trace) {
  for (auto& t : trace) t.erase("elapsed_ms");
  return trace;
}

std::string create_id(SessionStore& store, const json& payload) {
  const auto r = store.create(payload);
  REQUIRE(r.status == 201);
  return r.body["id"].get<std::string>();
}

}  // namespace

TEST_CASE("toy session starts with query (4, 5)") {
  SessionStore store;
  const auto r = store.create(toy_payload());
  REQUIRE(r.status == 201);
  CHECK(r.body["status"] == "Running");
  CHECK(r.body["pending_query"]["l"] == 4);
  CHECK(r.body["pending_query"]["k"] == 5);
  CHECK(r.body["pending_query"]["iteration"] == 0);
  CHECK(r.body["vertex_count"] == 4);
  CHECK(r.body["id"].get<std::string>().size() == 32);
  CHECK(store.size() == 1);
}

TEST_CASE("tau infinity ends at once") {
  SessionStore store;
  auto payload = toy_payload();
  payload["tau"] = "inf";
  const auto r = store.create(payload);
  REQUIRE(r.status == 201);
  CHECK(r.body["status"] == "BoundBelowTau");
  CHECK(r.body["pending_query"].is_null());
  CHECK(r.body["queries"] == 0);
}

TEST_CASE("create errors") {
  SessionStore store;
  CHECK(store.create(json::array()).status == 400);
  CHECK(store.create(json{{"tau", 1}}).status == 400);
  auto bad_tau = toy_payload();
  bad_tau["tau"] = -1;
  CHECK(store.create(bad_tau).status == 400);
  auto schema = toy_payload();
  schema["instance"].erase("kind");
  CHECK(store.create(schema).status == 400);
  const json disconnected{{"instance",
                           {{"kind", "graphic"}, {"n", 2}, {"vertices", 4}, {"edges", {{0, 1}, {2, 3}}},
                            {"Y", {{1, 2}, {3, 4}}}}}};
  CHECK(store.create(disconnected).status == 422);
  CHECK(store.size() == 0);
}

TEST_CASE("answering the toy session") {
  SessionStore store;
  const auto id = create_id(store, toy_payload());
  const auto first = store.answer(id, json{{"choice", "l"}});
  REQUIRE(first.status == 200);
  CHECK(first.body["vertex_count"] == 6);
  CHECK(first.body["iteration"] == 1);
  CHECK(first.body["pending_query"]["l"] == 5);
  CHECK(first.body["pending_query"]["k"] == 6);
  CHECK(first.body["mmr_bound"].is_number());
  CHECK(first.body["best_base"].is_array());
  // stale iteration
  const auto stale = store.answer(id, json{{"choice", "l"}, {"iteration", 0}});
  CHECK(stale.status == 409);
  const auto second = store.answer(id, json{{"choice", "k"}, {"iteration", 1}});
  REQUIRE(second.status == 200);
  CHECK(second.body["vertex_count"] == 7);
  CHECK(second.body["history"][1]["preferred"] == 6);
}

TEST_CASE("answer errors") {
  SessionStore store;
  CHECK(store.answer("ffff", json{{"choice", "l"}}).status == 404);
  CHECK(store.view("ffff").status == 404);
  CHECK(store.trace("ffff").status == 404);
  const auto id = create_id(store, toy_payload());
  CHECK(store.answer(id, json{{"choice", "x"}}).status == 400);
  CHECK(store.answer(id, json{{"pick", "l"}}).status == 400);
  CHECK(store.answer(id, json{{"choice", "l"}, {"iteration", "zero"}}).status == 400);

  auto done = toy_payload();
  done["tau"] = "inf";
  const auto finished = create_id(store, done);
  CHECK(store.answer(finished, json{{"choice", "l"}}).status == 409);
}

TEST_CASE("full toy session through the store matches the simulated run") {
  const auto problem = toy_scheduling_instance().problem();
  const SimulatedOracle o(problem.attributes, {{0.2, 0.3, 0.1, 0.4}});
  SessionStore store;
  const auto id = create_id(store, toy_payload());
  auto view = store.view(id).body;
  while (view["status"] == "Running") {
    const Element l = view["pending_query"]["l"].get<Element>() - 1;
    const Element k = view["pending_query"]["k"].get<Element>() - 1;
    const auto choice = o.answer(l, k) == Answer::PrefersL ? "l" : "k";
    const auto r = store.answer(id, json{{"choice", choice}, {"iteration", view["iteration"]}});
    REQUIRE(r.status == 200);
    view = store.view(id).body;
  }
  CHECK(view["status"] == "UniformOptimal");
  CHECK(view["mmr_bound"].get<double>() <= 1e-9);
  CHECK(view["best_base"].size() == 5);
  CHECK(view["region_vertices"].is_array());
  CHECK(view["elements"].size() == 8);
  const auto report = run(problem, o);
  CHECK(strip_timing(view["trace"]) == strip_timing(service::trace_to_json(report.trace)));
  CHECK(view["history"] == service::history_to_json(report.history));
  CHECK(strip_timing(store.trace(id).body["trace"]) == strip_timing(view["trace"]));
}

TEST_CASE("random payloads agree with the in-process run") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto doc = generate_instance({seed % 2 ? MatroidKind::Graphic : MatroidKind::Uniform, 10, 4, seed, 1, 9});
    const auto problem = doc.problem();
    const auto o = SimulatedOracle::from_seed(problem.attributes, seed);
    const auto report = run(problem, o);
    SessionStore store;
    const auto created = store.create(json{{"instance", instance_to_json(doc)}});
    REQUIRE(created.status == 201);
    if (report.history.empty()) {
      CHECK(created.body["pending_query"].is_null());
      continue;
    }
    CHECK(created.body["pending_query"]["l"] == report.history[0].query.l + 1);
    CHECK(created.body["pending_query"]["k"] == report.history[0].query.k + 1);
  }
}

TEST_CASE("after create the trace has one record") {
  SessionStore store;
  const auto id = create_id(store, toy_payload());
  const auto v = store.view(id);
  CHECK(v.body["trace"].size() == 1);
  CHECK(v.body["trace"][0]["vertices"] == 4);
  CHECK(v.body["trace"][0]["disparity"] == 7);
}

TEST_CASE("concurrent submits for the same iteration: one wins") {
  for (int round = 0; round < 20; ++round) {
    SessionStore store;
    const auto id = create_id(store, toy_payload());
    std::atomic<int> ok{0}, conflict{0};
    std::vector<std::jthread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&] {
        const auto r = store.answer(id, json{{"choice", "l"}, {"iteration", 0}});
        if (r.status == 200) ++ok;
        if (r.status == 409) ++conflict;
      });
    }
    threads.clear();
    CHECK(ok == 1);
    CHECK(conflict == 3);
  }
}

TEST_CASE("journal replay restores sessions") {
  const auto path = std::filesystem::temp_directory_path() / "elicit-test-journal.jsonl";
  std::filesystem::remove(path);
  std::string id;
  json before;
  {
    SessionStore store(path);
    id = create_id(store, toy_payload());
    REQUIRE(store.answer(id, json{{"choice", "l"}}).status == 200);
    REQUIRE(store.answer(id, json{{"choice", "k"}}).status == 200);
    before = store.view(id).body;
  }
  {
    SessionStore store(path);
    CHECK(store.size() == 1);
    auto after = store.view(id).body;
    REQUIRE(after.contains("iteration"));
    CHECK(after["iteration"] == before["iteration"]);
    CHECK(after["vertex_count"] == 7);
    CHECK(after["history"] == before["history"]);
    CHECK(strip_timing(after["trace"]) == strip_timing(before["trace"]));
  }
  std::filesystem::remove(path);
}

TEST_CASE("HTTP routes") {
  SessionStore store;
  httplib::Server server;
  service::register_routes(server, store, "http://localhost:5173");
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread loop([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/healthz");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(health->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");

  auto created = client.Post("/sessions", toy_payload().dump(), "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const auto body = json::parse(created->body);
  const auto id = body["id"].get<std::string>();

  auto bad = client.Post("/sessions", "{oops", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);

  auto answered = client.Post("/sessions/" + id + "/answer", R"({"choice":"l","iteration":0})", "application/json");
  REQUIRE(answered);
  CHECK(answered->status == 200);
  CHECK(json::parse(answered->body)["vertex_count"] == 6);
  auto again = client.Post("/sessions/" + id + "/answer", R"({"choice":"l","iteration":0})", "application/json");
  REQUIRE(again);
  CHECK(again->status == 409);

  auto state = client.Get("/sessions/" + id);
  REQUIRE(state);
  CHECK(state->status == 200);
  CHECK(json::parse(state->body)["trace"].size() == 2);
  auto trace = client.Get("/sessions/" + id + "/trace");
  REQUIRE(trace);
  CHECK(json::parse(trace->body)["trace"].size() == 2);
  auto missing = client.Get("/sessions/0123456789abcdef");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  auto preflight = client.Options("/sessions");
  REQUIRE(preflight);
  CHECK(preflight->status == 204);

  server.stop();
  loop.join();
}
