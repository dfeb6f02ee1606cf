#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scenesmith/retrieval/embedding.hpp"

namespace scenesmith {

enum class EntryKind { Asset, Api };

struct ScoredKey {
  std::string key;
  double score = 0.0;
  EntryKind kind = EntryKind::Asset;

  friend bool operator==(const ScoredKey&, const ScoredKey&) = default;
};

/// Exact-scan cosine index. Rows are stored contiguously so scoring is one SIMD pass.
class EmbeddingIndex {
 public:
  explicit EmbeddingIndex(std::size_t dim = kDefaultEmbeddingDim) : dim_(dim) {}

  /// Throws DimensionMismatch.
  void add(std::string key, const Embedding& e, EntryKind kind);

  std::size_t size() const { return keys_.size(); }
  std::size_t dim() const { return dim_; }
  std::size_t count(EntryKind kind) const;

  /// Descending score, exact ties by ascending key; length min(k, matching entries).
  /// Throws EmptyIndex when the index holds nothing, InvalidArgument when k < 1.
  std::vector<ScoredKey> top_k(const Embedding& query, std::size_t k,
                               std::optional<EntryKind> filter = std::nullopt) const;

 private:
  std::size_t dim_;
  std::vector<std::string> keys_;
  std::vector<EntryKind> kinds_;
  std::vector<double> rows_;
};

/// Uniform pick among the first min(5, len) entries, deterministic in the seed.
/// Throws EmptyInput for an empty list.
const ScoredKey& select_top5(const std::vector<ScoredKey>& ranked, std::uint64_t seed);

}  // namespace scenesmith
