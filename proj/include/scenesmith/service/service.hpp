#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "scenesmith/planner/config.hpp"
#include "scenesmith/planner/pipeline.hpp"

namespace httplib {
class Server;
}

namespace scenesmith {

struct ServiceOptions {
  std::uint64_t default_seed = 0;
  PipelineOptions pipeline;  // seed and answers are set per request
  /// Session snapshots go to <data_dir>/sessions/<id>/ when set.
  std::optional<std::filesystem::path> data_dir;
};

/// JSON-over-HTTP session API:
///   POST /sessions                      {"seed"?}        -> 201 {"id"}
///   POST /sessions/{id}/instruct        {"text"}         -> 202 {"job_id"} | 409 busy
///   POST /sessions/{id}/clarify         {"answers"}      -> 202 {"job_id"} | 409 nothing pending | 422 missing
///   GET  /sessions/{id}/status | scene | plan | report
/// Unknown sessions give 404, malformed bodies 422.
class Service {
 public:
  Service(Engine& engine, ServiceOptions options);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds (port 0 picks a free port) and serves on a background thread. Returns the port.
  int start(const std::string& host, int port);
  /// Serves on the calling thread until stop().
  void listen(const std::string& host, int port);
  void stop();

  /// Blocks until the session has no running job. For tests and the CLI.
  void wait_idle(const std::string& session_id);

 private:
  struct Session;

  void routes();
  std::shared_ptr<Session> find(const std::string& id);
  void launch(const std::shared_ptr<Session>& s, std::string text, std::map<std::string, nlohmann::json> answers);
  void snapshot(const Session& s);

  Engine& engine_;
  ServiceOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread listener_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t next_session_ = 1;
};

}  // namespace scenesmith
