#include "scenesmith/retrieval/embedder.hpp"

#include <cctype>

#include "scenesmith/core/error.hpp"
#include "scenesmith/core/hash.hpp"
#include "scenesmith/llm/http_util.hpp"

namespace scenesmith {

MockEmbedder::MockEmbedder(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "embedding dimension must be positive");
}

std::string MockEmbedder::normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

Embedding MockEmbedder::embed_text(std::string_view text) const {
  const std::string padded = " " + normalize_text(text) + " ";
  std::vector<double> v(dim_, 0.0);
  if (padded.size() < 3) {
    v[0] = 1.0;
    return Embedding::normalized(std::move(v));
  }
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    v[fnv1a64(std::string_view(padded).substr(i, 3)) % dim_] += 1.0;
  }
  return Embedding::normalized(std::move(v));
}

HttpEmbedder::HttpEmbedder(std::string endpoint, std::size_t dim, int timeout_seconds)
    : endpoint_(std::move(endpoint)), dim_(dim), timeout_seconds_(timeout_seconds) {}

Embedding HttpEmbedder::embed_text(std::string_view text) const {
  const nlohmann::json body = {{"input", std::string(text)}};
  const HttpResponse res = http_post_json(endpoint_, body.dump(), {}, timeout_seconds_);
  if (res.status != 200) {
    throw Error(ErrorCode::TransportError, "embedder returned HTTP " + std::to_string(res.status));
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(res.body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::TransportError, std::string("embedder response is not JSON: ") + e.what());
  }
  const nlohmann::json& arr = j.is_object() && j.contains("embedding") ? j.at("embedding") : j;
  if (!arr.is_array()) throw Error(ErrorCode::TransportError, "embedder response has no float array");
  std::vector<double> values;
  for (const auto& v : arr) {
    if (!v.is_number()) throw Error(ErrorCode::TransportError, "embedder response has non-numeric entries");
    values.push_back(v.get<double>());
  }
  if (values.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "embedder returned " + std::to_string(values.size()) +
                                                  " values, expected " + std::to_string(dim_));
  }
  return Embedding::normalized(std::move(values));
}

EmbedderConfig embedder_config_from_json(const nlohmann::json& j) {
  EmbedderConfig c;
  if (j.contains("kind")) c.kind = j.at("kind").get<std::string>();
  if (j.contains("dim")) c.dim = j.at("dim").get<std::size_t>();
  if (j.contains("endpoint")) c.endpoint = j.at("endpoint").get<std::string>();
  return c;
}

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config) {
  if (config.kind == "mock") return std::make_unique<MockEmbedder>(config.dim);
  if (config.kind == "http") return std::make_unique<HttpEmbedder>(config.endpoint, config.dim);
  throw Error(ErrorCode::InvalidArgument, "unknown embedder kind '" + config.kind + "'");
}

}  // namespace scenesmith
