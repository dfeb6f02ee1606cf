#pragma once

#include <memory>
#include <string>
#include <string_view>

#include <json.hpp>

#include "scenesmith/retrieval/embedding.hpp"

namespace scenesmith {

/// Text embedder contract: same input, identical vector.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual Embedding embed_text(std::string_view text) const = 0;
  virtual std::size_t dim() const = 0;
};

/// Hashed bag of character trigrams.
///
/// The text is lower-cased (ASCII), every non-alphanumeric byte becomes a space, runs of
/// spaces collapse, and the result is trimmed and padded with one space on each side. Each
/// 3-byte window w adds 1.0 to component fnv1a64(w) % dim; the vector is then L2-normalised.
/// Text with no trigram maps to the first basis vector.
class MockEmbedder final : public Embedder {
 public:
  explicit MockEmbedder(std::size_t dim = kDefaultEmbeddingDim);
  Embedding embed_text(std::string_view text) const override;
  std::size_t dim() const override { return dim_; }

  static std::string normalize_text(std::string_view text);

 private:
  std::size_t dim_;
};

/// POSTs {"input": text} to an endpoint and accepts either a bare JSON float array or an
/// object with an "embedding" array. The result is normalised; a dimension other than the
/// configured one raises DimensionMismatch.
class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(std::string endpoint, std::size_t dim, int timeout_seconds = 60);
  Embedding embed_text(std::string_view text) const override;
  std::size_t dim() const override { return dim_; }

 private:
  std::string endpoint_;
  std::size_t dim_;
  int timeout_seconds_;
};

struct EmbedderConfig {
  std::string kind = "mock";  // mock | http
  std::size_t dim = kDefaultEmbeddingDim;
  std::string endpoint;
};

EmbedderConfig embedder_config_from_json(const nlohmann::json& j);
std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config);

}  // namespace scenesmith
