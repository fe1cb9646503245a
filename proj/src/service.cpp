#include "elicit/service.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "httplib.h"

#include "elicit/errors.hpp"
#include "elicit/instance_io.hpp"

namespace elicit::service {

using nlohmann::json;

namespace {

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

json error_body(const std::string& message) { return json{{"error", message}}; }

json base_to_json(const Base& base) {
  json out = json::array();
  for (Element e : base) out.push_back(e + 1);
  return out;
}

json query_to_json(const Query& q) { return json{{"l", q.l + 1}, {"k", q.k + 1}}; }

double parse_tau(const json& payload) {
  if (!payload.contains("tau")) return 0.0;
  const auto& t = payload["tau"];
  if (t.is_string()) {
    const auto s = t.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw InputError("tau must be a number or \"inf\"");
  }
  if (!t.is_number() || !(t.get<double>() >= 0.0)) throw InputError("tau must be a nonnegative number");
  return t.get<double>();
}

json element_descriptions(const Problem& problem) {
  const auto& m = problem.matroid;
  json out = json::array();
  for (Element e = 0; e < m.size(); ++e) {
    const auto row = problem.attributes.row(e);
    json item{{"id", e + 1}, {"attributes", std::vector<double>(row.begin(), row.end())}};
    switch (m.kind()) {
      case MatroidKind::Graphic:
        item["edge"] = {m.edges()[e].u, m.edges()[e].v};
        break;
      case MatroidKind::Scheduling:
        item["deadline"] = m.deadlines()[e];
        break;
      case MatroidKind::Partition:
        item["block"] = m.block_of()[e] + 1;
        break;
      case MatroidKind::Uniform:
        break;
    }
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace

json trace_to_json(const std::vector<IterationRecord>& trace) {
  json out = json::array();
  for (const auto& t : trace) {
    out.push_back(json{{"iteration", t.iteration},
                       {"vertices", t.vertex_count},
                       {"pool", t.pool_size},
                       {"disparity", t.disparity_count},
                       {"mmr_bound", t.mmr_bound},
                       {"elapsed_ms", t.elapsed_ms},
                       {"query", t.query ? query_to_json(*t.query) : json(nullptr)},
                       {"status", std::string(to_string(t.status))}});
  }
  return out;
}

json history_to_json(const std::vector<QueryRecord>& history) {
  json out = json::array();
  for (const auto& h : history) {
    const Element preferred = h.answer == Answer::PrefersL ? h.query.l : h.query.k;
    out.push_back(json{{"l", h.query.l + 1},
                       {"k", h.query.k + 1},
                       {"answer", h.answer == Answer::PrefersL ? "l" : "k"},
                       {"preferred", preferred + 1},
                       {"iteration", h.iteration},
                       {"informative", h.outcome == CutOutcome::Refined}});
  }
  return out;
}

std::string new_session_id() {
  std::random_device device;
  std::ostringstream out;
  out << std::hex << std::setfill('0');
  for (int i = 0; i < 4; ++i) out << std::setw(8) << static_cast<std::uint32_t>(device());
  return out.str();
}

SessionStore::SessionStore(std::optional<std::filesystem::path> journal) {
  if (!journal) return;
  if (std::filesystem::exists(*journal)) replay(*journal);
  journal_.emplace(*journal, std::ios::app);
  if (!*journal_) throw InputError("cannot open journal " + journal->string());
}

std::size_t SessionStore::size() const {
  std::shared_lock lock(mutex_);
  return sessions_.size();
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void SessionStore::append_journal(const json& event) {
  std::lock_guard lock(journal_mutex_);
  if (!journal_) return;
  *journal_ << event.dump() << '\n';
  journal_->flush();
}

void SessionStore::replay(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto event = json::parse(line, nullptr, false);
    if (event.is_discarded() || !event.contains("event") || !event.contains("id")) continue;
    const auto id = event["id"].get<std::string>();
    if (event["event"] == "create") {
      create_with_id(event["payload"], id, false);
    } else if (event["event"] == "answer") {
      if (auto session = find(id)) {
        std::lock_guard lock(session->mutex);
        answer_locked(*session, event["payload"], false);
      }
    }
  }
}

HttpResult SessionStore::create(const json& payload) {
  return create_with_id(payload, new_session_id(), true);
}

HttpResult SessionStore::create_with_id(const json& payload, std::string id, bool journal) {
  std::shared_ptr<Session> session;
  try {
    if (!payload.is_object()) throw InputError("request body must be a JSON object");
    if (!payload.contains("instance")) throw InputError("request is missing field 'instance'");
    const auto doc = instance_from_json(payload["instance"]);
    Sense sense = doc.sense.value_or(Sense::Max);
    if (payload.contains("sense")) {
      if (!payload["sense"].is_string()) throw InputError("field 'sense' must be a string");
      sense = parse_sense(payload["sense"].get<std::string>());
    }
    ElicitationConfig config{parse_tau(payload), 500};
    if (payload.contains("max_iters")) {
      const auto& mi = payload["max_iters"];
      if (!mi.is_number_integer() || mi.get<long long>() < 1) {
        throw InputError("max_iters must be a positive integer");
      }
      config.max_iterations = mi.get<std::size_t>();
    }
    ElicitationState state(doc.problem(sense), config);
    json snapshot{{"tau", std::isinf(config.tau) ? json("inf") : json(config.tau)},
                  {"sense", std::string(to_string(sense))},
                  {"max_iters", config.max_iterations}};
    session = std::make_shared<Session>(id, std::move(state), std::move(snapshot));
  } catch (const InconsistentInstance& e) {
    return {422, error_body(e.what())};
  } catch (const Error& e) {
    return {400, error_body(e.what())};
  }

  session->created_ms = session->updated_ms = now_ms();
  {
    std::lock_guard lock(session->mutex);
    session->state.advance();
  }
  {
    std::unique_lock lock(mutex_);
    sessions_[id] = session;
  }
  if (journal) append_journal(json{{"event", "create"}, {"id", id}, {"payload", payload}});
  std::lock_guard lock(session->mutex);
  return {201, describe(*session, false)};
}

HttpResult SessionStore::answer(const std::string& id, const json& payload) {
  auto session = find(id);
  if (!session) return {404, error_body("unknown session")};
  std::lock_guard lock(session->mutex);
  return answer_locked(*session, payload, true);
}

HttpResult SessionStore::answer_locked(Session& session, const json& payload, bool journal) {
  if (!payload.is_object() || !payload.contains("choice") || !payload["choice"].is_string()) {
    return {400, error_body("body must be {\"choice\": \"l\" | \"k\"}")};
  }
  const auto choice = payload["choice"].get<std::string>();
  if (choice != "l" && choice != "k") return {400, error_body("choice must be \"l\" or \"k\"")};
  auto& state = session.state;
  const auto pending = state.pending();
  if (!pending) return {409, error_body("session has no pending query")};
  if (payload.contains("iteration")) {
    const auto& it = payload["iteration"];
    if (!it.is_number_integer()) return {400, error_body("iteration must be an integer")};
    if (it.get<long long>() != static_cast<long long>(state.iteration())) {
      return {409, error_body("answer refers to a query that is no longer pending")};
    }
  }
  const std::size_t answered_iteration = state.iteration();
  state.apply_answer(*pending, choice == "l" ? Answer::PrefersL : Answer::PrefersK);
  state.advance();
  session.updated_ms = now_ms();
  if (journal) {
    append_journal(json{{"event", "answer"},
                        {"id", session.id},
                        {"payload", json{{"choice", choice}, {"iteration", answered_iteration}}},
                        {"snapshot",
                         json{{"iteration", state.iteration()},
                              {"status", std::string(to_string(state.status()))},
                              {"vertex_count", state.polytope().vertices().size()},
                              {"mmr_bound", state.mmr_bound()}}}});
  }
  return {200, describe(session, false)};
}

HttpResult SessionStore::view(const std::string& id) const {
  auto session = find(id);
  if (!session) return {404, error_body("unknown session")};
  std::lock_guard lock(session->mutex);
  return {200, describe(*session, true)};
}

HttpResult SessionStore::trace(const std::string& id) const {
  auto session = find(id);
  if (!session) return {404, error_body("unknown session")};
  std::lock_guard lock(session->mutex);
  return {200, json{{"id", session->id}, {"trace", trace_to_json(session->state.trace())}}};
}

json SessionStore::describe(const Session& session, bool with_trace) {
  const auto& state = session.state;
  json out{{"id", session.id},
           {"status", std::string(to_string(state.status()))},
           {"iteration", state.iteration()},
           {"queries", state.history().size()},
           {"vertex_count", state.polytope().vertices().size()},
           {"mmr_bound", state.mmr_bound()},
           {"best_base", base_to_json(state.recommended_base())},
           {"note", state.note()},
           {"config", session.config},
           {"created_ms", session.created_ms},
           {"updated_ms", session.updated_ms},
           {"history", history_to_json(state.history())}};
  if (const auto& q = state.pending()) {
    auto pending = query_to_json(*q);
    pending["iteration"] = state.iteration();
    out["pending_query"] = std::move(pending);
  } else {
    out["pending_query"] = nullptr;
  }
  if (with_trace) {
    out["trace"] = trace_to_json(state.trace());
    out["elements"] = element_descriptions(state.problem());
    out["kind"] = std::string(to_string(state.problem().matroid.kind()));
    if (state.problem().p() <= 4) {
      json vertices = json::array();
      for (const auto& v : state.polytope().vertices()) vertices.push_back(v.point.coords);
      out["region_vertices"] = std::move(vertices);
    }
  }
  return out;
}

void register_routes(httplib::Server& server, SessionStore& store, const std::string& cors_origin) {
  server.set_default_headers({{"Access-Control-Allow-Origin", cors_origin},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});

  auto reply = [](httplib::Response& res, const HttpResult& result) {
    res.status = result.status;
    res.set_content(result.body.dump(), "application/json");
  };
  auto parse = [](const httplib::Request& req) { return json::parse(req.body, nullptr, false); };

  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.Get("/healthz", [reply](const httplib::Request&, httplib::Response& res) {
    reply(res, {200, json{{"status", "ok"}}});
  });
  server.Post("/sessions", [&store, reply, parse](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse(req);
    if (body.is_discarded()) return reply(res, {400, error_body("request body is not valid JSON")});
    reply(res, store.create(body));
  });
  server.Get(R"(/sessions/([0-9a-f]+))", [&store, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, store.view(req.matches[1]));
  });
  server.Get(R"(/sessions/([0-9a-f]+)/trace)",
             [&store, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, store.trace(req.matches[1]));
             });
  server.Post(R"(/sessions/([0-9a-f]+)/answer)",
              [&store, reply, parse](const httplib::Request& req, httplib::Response& res) {
                const auto body = parse(req);
                if (body.is_discarded()) return reply(res, {400, error_body("request body is not valid JSON")});
                reply(res, store.answer(req.matches[1], body));
              });
}

}  // namespace elicit::service
