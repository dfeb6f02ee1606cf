#pragma once

#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace scenesmith {

enum class Role { System, User, Assistant };

std::string_view role_name(Role role);

struct ChatMessage {
  Role role = Role::User;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

enum class BackendKind { Replay, ScriptedMock, Http };

std::string_view backend_kind_name(BackendKind kind);

struct BackendConfig {
  BackendKind kind = BackendKind::Replay;
  std::string endpoint;  // full chat-completions URL for the http backend
  std::string model = "mock";
  std::string api_key_env;
  double temperature = 0.0;
  /// Replay: a cassette file or a directory of *.json cassettes. Recording appends here.
  std::filesystem::path cassette;
  int timeout_seconds = 60;
  int max_retries = 3;
  int retry_backoff_ms = 500;  // doubled after each rate-limited attempt
};

/// Keys: kind, endpoint, model, api_key_env, temperature, cassette, timeout_seconds.
BackendConfig backend_config_from_json(const nlohmann::json& j);
nlohmann::json backend_config_to_json(const BackendConfig& c);

/// Canonical request document: {"messages": [...], "model": ..., "temperature": ...}.
nlohmann::json request_document(const std::string& model, double temperature, const std::vector<ChatMessage>& messages);

/// Hex FNV-1a 64 of the compact canonical request document.
std::string request_hash(const std::string& model, double temperature, const std::vector<ChatMessage>& messages);

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;

  /// Throws TransportError, UnmatchedTranscript or RateLimited.
  virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;

  virtual const std::string& model() const = 0;
  virtual double temperature() const = 0;
};

struct CassetteEntry {
  std::string hash;
  nlohmann::json request;
  std::string response;
};

inline constexpr std::string_view kCassetteSchema = "cassette/1";

std::vector<CassetteEntry> load_cassette(const std::filesystem::path& path);
void save_cassette(const std::filesystem::path& path, const std::vector<CassetteEntry>& entries);

class ReplayBackend : public LlmBackend {
 public:
  ReplayBackend(std::string model, double temperature, const std::vector<CassetteEntry>& entries);
  /// Loads a cassette file, or every *.json cassette in a directory.
  static std::unique_ptr<ReplayBackend> from_path(std::string model, double temperature,
                                                  const std::filesystem::path& path);

  std::string complete(const std::vector<ChatMessage>& messages) override;
  const std::string& model() const override { return model_; }
  double temperature() const override { return temperature_; }

 private:
  std::string model_;
  double temperature_;
  std::map<std::string, std::string> responses_;
};

/// Returns queued responses in FIFO order regardless of the request.
class ScriptedBackend : public LlmBackend {
 public:
  explicit ScriptedBackend(std::vector<std::string> responses, std::string model = "mock");

  std::string complete(const std::vector<ChatMessage>& messages) override;
  const std::string& model() const override { return model_; }
  double temperature() const override { return 0.0; }

  void push(std::string response);
  std::size_t remaining() const;
  /// Every request seen so far.
  std::vector<std::vector<ChatMessage>> requests() const;

 private:
  std::string model_;
  mutable std::mutex mutex_;
  std::deque<std::string> queue_;
  std::vector<std::vector<ChatMessage>> requests_;
};

/// Chat-completions over HTTP; the API key comes from the named environment variable.
class HttpBackend : public LlmBackend {
 public:
  explicit HttpBackend(BackendConfig config);

  std::string complete(const std::vector<ChatMessage>& messages) override;
  const std::string& model() const override { return config_.model; }
  double temperature() const override { return config_.temperature; }

 private:
  BackendConfig config_;
};

/// Forwards to an inner backend and appends each exchange to a cassette file.
class RecordingBackend : public LlmBackend {
 public:
  RecordingBackend(std::unique_ptr<LlmBackend> inner, std::filesystem::path cassette);

  std::string complete(const std::vector<ChatMessage>& messages) override;
  const std::string& model() const override { return inner_->model(); }
  double temperature() const override { return inner_->temperature(); }

 private:
  std::unique_ptr<LlmBackend> inner_;
  std::filesystem::path cassette_;
  std::mutex mutex_;
};

/// Replay and http backends; scripted mocks are built directly by tests.
std::unique_ptr<LlmBackend> make_backend(const BackendConfig& config);

}  // namespace scenesmith
