#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "scenesmith/retrieval/index.hpp"

namespace scenesmith {

class Registry;
class Embedder;

/// API descriptions are embedded from the descriptor description; assets use their stored
/// vectors. Throws DimensionMismatch when the embedder and catalog disagree.
EmbeddingIndex build_index(const Registry& registry, const Embedder& embedder);

struct RetrievalOptions {
  /// An API counts as found when its cosine score reaches this value.
  double api_threshold = 0.5;
};

struct RetrievalHit {
  EntryKind kind = EntryKind::Asset;   // Api -> hyperparameter generation, Asset -> import
  std::string key;                     // plugin name or asset id
  double score = 0.0;
  std::vector<ScoredKey> candidates;   // asset top-5 the choice was drawn from (empty for APIs)

  friend bool operator==(const RetrievalHit&, const RetrievalHit&) = default;
};

/// Rank-1 API when its score clears the threshold, otherwise a seeded pick among the top
/// five assets. Throws EmptyIndex when nothing can be returned.
RetrievalHit retrieve(const EmbeddingIndex& index, std::string_view query, const Embedder& embedder,
                      std::uint64_t seed, const RetrievalOptions& options = {});

}  // namespace scenesmith
