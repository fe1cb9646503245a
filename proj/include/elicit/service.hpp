#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "elicit/elicitation.hpp"

namespace httplib {
class Server;
}

namespace elicit::service {

/// Status code plus JSON body, independent of the HTTP transport.
struct HttpResult {
  int status = 200;
  nlohmann::json body;
};

nlohmann::json trace_to_json(const std::vector<IterationRecord>& trace);
nlohmann::json history_to_json(const std::vector<QueryRecord>& history);

/// In-memory elicitation sessions, optionally journaled as JSON lines.
///
///   POST /sessions              {"instance": {...}, "tau": 0 | "inf", "sense": "max",
///                                "max_iters": 500}
///   GET  /sessions/{id}         session view
///   POST /sessions/{id}/answer  {"choice": "l" | "k", "iteration": r}
///   GET  /sessions/{id}/trace   per-iteration records
///
/// `iteration` in an answer is optional; when present it must match the
/// pending query's iteration or the answer is rejected with 409.
class SessionStore {
 public:
  explicit SessionStore(std::optional<std::filesystem::path> journal = std::nullopt);

  HttpResult create(const nlohmann::json& payload);
  HttpResult answer(const std::string& id, const nlohmann::json& payload);
  HttpResult view(const std::string& id) const;
  HttpResult trace(const std::string& id) const;

  std::size_t size() const;

 private:
  struct Session {
    std::string id;
    ElicitationState state;
    nlohmann::json config;
    std::int64_t created_ms = 0;
    std::int64_t updated_ms = 0;
    mutable std::mutex mutex;

    Session(std::string session_id, ElicitationState s, nlohmann::json cfg)
        : id(std::move(session_id)), state(std::move(s)), config(std::move(cfg)) {}
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  HttpResult create_with_id(const nlohmann::json& payload, std::string id, bool journal);
  HttpResult answer_locked(Session& session, const nlohmann::json& payload, bool journal);
  void append_journal(const nlohmann::json& event);
  void replay(const std::filesystem::path& path);
  static nlohmann::json describe(const Session& session, bool with_trace);

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex journal_mutex_;
  std::optional<std::ofstream> journal_;
};

/// 128 random bits as 32 hex digits.
std::string new_session_id();

/// Installs the JSON routes (and CORS headers for `cors_origin`).
void register_routes(httplib::Server& server, SessionStore& store,
                     const std::string& cors_origin = "*");

}  // namespace elicit::service
