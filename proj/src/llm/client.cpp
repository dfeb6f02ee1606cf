#include "scenesmith/llm/client.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "scenesmith/core/error.hpp"
#include "scenesmith/core/hash.hpp"
#include "scenesmith/llm/http_util.hpp"
#include "scenesmith/scene/scene_io.hpp"

namespace scenesmith {

using nlohmann::json;

std::string_view role_name(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

std::string_view backend_kind_name(BackendKind kind) {
  switch (kind) {
    case BackendKind::Replay: return "replay";
    case BackendKind::ScriptedMock: return "scripted-mock";
    case BackendKind::Http: return "http";
  }
  return "replay";
}

BackendConfig backend_config_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("llm", "expected an object");
  BackendConfig c;
  const std::string kind = j.value("kind", std::string("replay"));
  if (kind == "replay") c.kind = BackendKind::Replay;
  else if (kind == "scripted-mock") c.kind = BackendKind::ScriptedMock;
  else if (kind == "http") c.kind = BackendKind::Http;
  else throw SchemaError("kind", "unknown backend kind '" + kind + "'");
  c.endpoint = j.value("endpoint", c.endpoint);
  c.model = j.value("model", c.model);
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  c.temperature = j.value("temperature", c.temperature);
  c.cassette = j.value("cassette", std::string());
  c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
  return c;
}

json backend_config_to_json(const BackendConfig& c) {
  return {{"kind", backend_kind_name(c.kind)}, {"endpoint", c.endpoint},
          {"model", c.model},                  {"api_key_env", c.api_key_env},
          {"temperature", c.temperature},      {"cassette", c.cassette.generic_string()},
          {"timeout_seconds", c.timeout_seconds}};
}

json request_document(const std::string& model, double temperature, const std::vector<ChatMessage>& messages) {
  json msgs = json::array();
  for (const ChatMessage& m : messages) msgs.push_back({{"role", role_name(m.role)}, {"content", m.content}});
  return {{"messages", msgs}, {"model", model}, {"temperature", temperature}};
}

std::string request_hash(const std::string& model, double temperature, const std::vector<ChatMessage>& messages) {
  return to_hex64(fnv1a64(request_document(model, temperature, messages).dump()));
}

std::vector<CassetteEntry> load_cassette(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  if (!doc.is_object() || doc.value("schema", std::string()) != kCassetteSchema) {
    throw SchemaError("schema", path.string() + " is not a " + std::string(kCassetteSchema) + " cassette");
  }
  std::vector<CassetteEntry> out;
  for (const json& e : doc.at("entries")) {
    out.push_back({e.at("hash").get<std::string>(), e.value("request", json()), e.at("response").get<std::string>()});
  }
  return out;
}

void save_cassette(const std::filesystem::path& path, const std::vector<CassetteEntry>& entries) {
  json list = json::array();
  for (const CassetteEntry& e : entries) {
    list.push_back({{"hash", e.hash}, {"request", e.request}, {"response", e.response}});
  }
  write_file(path, canonical_dump({{"schema", kCassetteSchema}, {"entries", list}}));
}

ReplayBackend::ReplayBackend(std::string model, double temperature, const std::vector<CassetteEntry>& entries)
    : model_(std::move(model)), temperature_(temperature) {
  for (const CassetteEntry& e : entries) responses_[e.hash] = e.response;
}

std::unique_ptr<ReplayBackend> ReplayBackend::from_path(std::string model, double temperature,
                                                        const std::filesystem::path& path) {
  std::vector<CassetteEntry> entries;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& de : std::filesystem::directory_iterator(path)) {
      if (de.path().extension() == ".json") files.push_back(de.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto part = load_cassette(f);
      entries.insert(entries.end(), part.begin(), part.end());
    }
  } else {
    entries = load_cassette(path);
  }
  return std::make_unique<ReplayBackend>(std::move(model), temperature, entries);
}

std::string ReplayBackend::complete(const std::vector<ChatMessage>& messages) {
  const std::string hash = request_hash(model_, temperature_, messages);
  auto it = responses_.find(hash);
  if (it == responses_.end()) {
    throw Error(ErrorCode::UnmatchedTranscript, "no recorded response for request " + hash);
  }
  return it->second;
}

ScriptedBackend::ScriptedBackend(std::vector<std::string> responses, std::string model)
    : model_(std::move(model)), queue_(responses.begin(), responses.end()) {}

std::string ScriptedBackend::complete(const std::vector<ChatMessage>& messages) {
  std::lock_guard lock(mutex_);
  requests_.push_back(messages);
  if (queue_.empty()) throw Error(ErrorCode::UnmatchedTranscript, "scripted backend has no responses left");
  std::string out = std::move(queue_.front());
  queue_.pop_front();
  return out;
}

void ScriptedBackend::push(std::string response) {
  std::lock_guard lock(mutex_);
  queue_.push_back(std::move(response));
}

std::size_t ScriptedBackend::remaining() const {
  std::lock_guard lock(mutex_);
  return queue_.size();
}

std::vector<std::vector<ChatMessage>> ScriptedBackend::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw Error(ErrorCode::InvalidArgument, "http backend needs an endpoint");
  split_url(config_.endpoint);
}

std::string HttpBackend::complete(const std::vector<ChatMessage>& messages) {
  const std::string body = request_document(config_.model, config_.temperature, messages).dump();
  std::vector<std::pair<std::string, std::string>> headers;
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str())) {
      headers.emplace_back("Authorization", std::string("Bearer ") + key);
    }
  }
  int backoff = config_.retry_backoff_ms;
  for (int attempt = 0;; ++attempt) {
    const HttpResponse res = http_post_json(config_.endpoint, body, headers, config_.timeout_seconds);
    if (res.status == 429) {
      if (attempt >= config_.max_retries) {
        throw Error(ErrorCode::RateLimited, "rate limited after " + std::to_string(attempt + 1) + " attempts");
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
      continue;
    }
    if (res.status < 200 || res.status >= 300) {
      throw Error(ErrorCode::TransportError, "chat endpoint returned HTTP " + std::to_string(res.status));
    }
    try {
      const json doc = json::parse(res.body);
      return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::TransportError, std::string("malformed chat completion: ") + e.what());
    }
  }
}

RecordingBackend::RecordingBackend(std::unique_ptr<LlmBackend> inner, std::filesystem::path cassette)
    : inner_(std::move(inner)), cassette_(std::move(cassette)) {}

std::string RecordingBackend::complete(const std::vector<ChatMessage>& messages) {
  std::string response = inner_->complete(messages);
  std::lock_guard lock(mutex_);
  std::vector<CassetteEntry> entries;
  if (std::filesystem::exists(cassette_)) entries = load_cassette(cassette_);
  const std::string hash = request_hash(inner_->model(), inner_->temperature(), messages);
  auto it = std::find_if(entries.begin(), entries.end(), [&](const CassetteEntry& e) { return e.hash == hash; });
  CassetteEntry entry{hash, request_document(inner_->model(), inner_->temperature(), messages), response};
  if (it == entries.end()) entries.push_back(std::move(entry));
  else *it = std::move(entry);
  save_cassette(cassette_, entries);
  return response;
}

std::unique_ptr<LlmBackend> make_backend(const BackendConfig& config) {
  switch (config.kind) {
    case BackendKind::Replay:
      return ReplayBackend::from_path(config.model, config.temperature, config.cassette);
    case BackendKind::Http:
      return std::make_unique<HttpBackend>(config);
    case BackendKind::ScriptedMock:
      break;
  }
  throw Error(ErrorCode::InvalidArgument, "scripted-mock backends are constructed in code, not from config");
}

}  // namespace scenesmith
