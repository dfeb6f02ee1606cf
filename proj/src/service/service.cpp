#include "scenesmith/service/service.hpp"

#include <condition_variable>
#include <cstdio>

#include <httplib.h>

#include "scenesmith/core/error.hpp"
#include "scenesmith/core/hash.hpp"
#include "scenesmith/scene/scene_io.hpp"

namespace scenesmith {

using nlohmann::json;

struct Service::Session {
  std::string id;
  std::uint64_t seed = 0;
  std::size_t turns = 0;

  std::mutex mutex;
  std::condition_variable idle;
  bool busy = false;
  std::thread worker;
  std::size_t jobs = 0;
  std::string status = "idle";  // idle | running | done | failed | needs_clarification
  std::string error;

  SceneGraph scene;  // last consistent scene
  std::optional<ActionPlan> plan;
  std::optional<RunReport> report;
  std::optional<ClarificationRequest> pending;
  std::string pending_text;
};

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message, json extra = json::object()) {
  extra["error"] = message;
  reply(res, status, extra);
}

std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
  try {
    json body = req.body.empty() ? json::object() : json::parse(req.body);
    if (!body.is_object()) {
      reply_error(res, 422, "request body must be a JSON object");
      return std::nullopt;
    }
    return body;
  } catch (const json::parse_error& e) {
    reply_error(res, 422, std::string("malformed JSON: ") + e.what());
    return std::nullopt;
  }
}

}  // namespace

Service::Service(Engine& engine, ServiceOptions options)
    : engine_(engine), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  routes();
}

Service::~Service() {
  stop();
  std::map<std::string, std::shared_ptr<Session>> sessions;
  {
    std::lock_guard lock(mutex_);
    sessions = sessions_;
  }
  for (auto& [id, s] : sessions) {
    if (s->worker.joinable()) s->worker.join();
  }
}

int Service::start(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  listener_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void Service::listen(const std::string& host, int port) {
  if (!server_->listen(host, port)) throw Error(ErrorCode::IoError, "cannot listen on " + host + ":" + std::to_string(port));
}

void Service::stop() {
  server_->stop();
  if (listener_.joinable()) listener_.join();
}

void Service::wait_idle(const std::string& session_id) {
  auto s = find(session_id);
  if (!s) return;
  std::unique_lock lock(s->mutex);
  s->idle.wait(lock, [&] { return !s->busy; });
}

std::shared_ptr<Service::Session> Service::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void Service::snapshot(const Session& s) {
  if (!options_.data_dir) return;
  const auto dir = *options_.data_dir / "sessions" / s.id;
  std::filesystem::create_directories(dir);
  write_file(dir / "scene.json", canonical_dump(scene_to_json(s.scene)));
  if (s.plan) write_file(dir / "plan.json", serialize_plan(*s.plan));
  if (s.report) write_file(dir / "report.json", canonical_dump(run_report_to_json(*s.report)));
}

/// Caller holds s->mutex and has set busy.
void Service::launch(const std::shared_ptr<Session>& s, std::string text, std::map<std::string, json> answers) {
  if (s->worker.joinable()) s->worker.join();
  s->status = "running";
  s->error.clear();
  ++s->jobs;
  const std::uint64_t seed = s->turns == 0 ? s->seed : derive_seed(s->seed, s->turns);
  std::optional<SceneGraph> base;
  if (s->turns > 0) base = s->scene;
  s->worker = std::thread([this, s, text = std::move(text), answers = std::move(answers), seed, base] {
    PipelineOptions opts = options_.pipeline;
    opts.seed = seed;
    opts.interactive = true;
    opts.answers = answers;
    std::optional<PipelineResult> result;
    std::string error;
    try {
      result = run_pipeline(text, engine_.deps(), opts, base);
    } catch (const Error& e) {
      error = std::string(error_code_name(e.code())) + ": " + e.what();
    } catch (const std::exception& e) {
      error = e.what();
    }
    std::lock_guard lock(s->mutex);
    if (!result) {
      s->status = "failed";
      s->error = error;
    } else if (result->clarification) {
      s->status = "needs_clarification";
      s->pending = result->clarification;
      s->pending_text = text;
      s->report = result->report;
    } else {
      s->pending.reset();
      s->scene = std::move(result->scene);
      s->plan = std::move(result->plan);
      s->report = std::move(result->report);
      ++s->turns;
      s->status = "done";
      try {
        snapshot(*s);
      } catch (const Error& e) {
        s->error = std::string("snapshot failed: ") + e.what();
      }
    }
    s->busy = false;
    s->idle.notify_all();
  });
}

void Service::routes() {
  server_->Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req, res);
    if (!body) return;
    auto s = std::make_shared<Session>();
    if (body->contains("seed")) {
      if (!body->at("seed").is_number_unsigned()) return reply_error(res, 422, "seed must be an unsigned integer");
      s->seed = body->at("seed").get<std::uint64_t>();
    } else {
      s->seed = options_.default_seed;
    }
    {
      std::lock_guard lock(mutex_);
      char buf[32];
      std::snprintf(buf, sizeof buf, "session_%04zu", next_session_++);
      s->id = buf;
      s->scene = SceneGraph(s->seed);
      sessions_[s->id] = s;
    }
    reply(res, 201, {{"id", s->id}, {"seed", s->seed}});
  });

  server_->Post(R"(/sessions/([^/]+)/instruct)", [this](const httplib::Request& req, httplib::Response& res) {
    auto s = find(req.matches[1]);
    if (!s) return reply_error(res, 404, "unknown session");
    auto body = parse_body(req, res);
    if (!body) return;
    if (!body->contains("text") || !body->at("text").is_string() || body->at("text").get<std::string>().empty()) {
      return reply_error(res, 422, "body needs a non-empty string \"text\"");
    }
    std::lock_guard lock(s->mutex);
    if (s->busy) return reply_error(res, 409, "session is busy");
    s->busy = true;
    s->pending.reset();
    launch(s, body->at("text").get<std::string>(), {});
    reply(res, 202, {{"job_id", s->id + "/" + std::to_string(s->jobs)}, {"status", s->status}});
  });

  server_->Post(R"(/sessions/([^/]+)/clarify)", [this](const httplib::Request& req, httplib::Response& res) {
    auto s = find(req.matches[1]);
    if (!s) return reply_error(res, 404, "unknown session");
    auto body = parse_body(req, res);
    if (!body) return;
    if (!body->contains("answers") || !body->at("answers").is_object()) {
      return reply_error(res, 422, "body needs an \"answers\" object");
    }
    std::lock_guard lock(s->mutex);
    if (s->busy) return reply_error(res, 409, "session is busy");
    if (!s->pending) return reply_error(res, 409, "no clarification is pending");
    std::map<std::string, json> answers;
    for (const auto& [k, v] : body->at("answers").items()) answers[k] = v;
    json missing = json::array();
    for (const std::string& f : s->pending->fields) {
      if (answers.count(f) == 0) missing.push_back(f);
    }
    if (!missing.empty()) return reply_error(res, 422, "missing answers", {{"missing", missing}});
    s->busy = true;
    launch(s, s->pending_text, std::move(answers));
    reply(res, 202, {{"job_id", s->id + "/" + std::to_string(s->jobs)}, {"status", s->status}});
  });

  server_->Get(R"(/sessions/([^/]+)/status)", [this](const httplib::Request& req, httplib::Response& res) {
    auto s = find(req.matches[1]);
    if (!s) return reply_error(res, 404, "unknown session");
    std::lock_guard lock(s->mutex);
    reply(res, 200,
          {{"id", s->id},
           {"status", s->status},
           {"busy", s->busy},
           {"error", s->error},
           {"jobs", s->jobs},
           {"clarification", s->pending ? clarification_to_json(*s->pending) : json(nullptr)}});
  });

  server_->Get(R"(/sessions/([^/]+)/scene)", [this](const httplib::Request& req, httplib::Response& res) {
    auto s = find(req.matches[1]);
    if (!s) return reply_error(res, 404, "unknown session");
    std::lock_guard lock(s->mutex);
    res.status = 200;
    res.set_content(canonical_dump(scene_to_json(s->scene)), "application/json");
  });

  server_->Get(R"(/sessions/([^/]+)/plan)", [this](const httplib::Request& req, httplib::Response& res) {
    auto s = find(req.matches[1]);
    if (!s) return reply_error(res, 404, "unknown session");
    std::lock_guard lock(s->mutex);
    if (!s->plan) return reply_error(res, 404, "no plan yet");
    res.status = 200;
    res.set_content(serialize_plan(*s->plan), "application/json");
  });

  server_->Get(R"(/sessions/([^/]+)/report)", [this](const httplib::Request& req, httplib::Response& res) {
    auto s = find(req.matches[1]);
    if (!s) return reply_error(res, 404, "unknown session");
    std::lock_guard lock(s->mutex);
    if (!s->report) return reply_error(res, 404, "no report yet");
    res.status = 200;
    res.set_content(canonical_dump(run_report_to_json(*s->report)), "application/json");
  });
}

}  // namespace scenesmith
