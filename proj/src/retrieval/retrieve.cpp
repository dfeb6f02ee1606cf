#include "scenesmith/retrieval/retrieve.hpp"

#include "scenesmith/core/error.hpp"
#include "scenesmith/registry/registry.hpp"
#include "scenesmith/retrieval/embedder.hpp"

namespace scenesmith {

EmbeddingIndex build_index(const Registry& registry, const Embedder& embedder) {
  EmbeddingIndex index(embedder.dim());
  for (const auto& [name, d] : registry.descriptors()) index.add(name, embedder.embed_text(d.description), EntryKind::Api);
  for (const auto& [id, a] : registry.assets()) index.add(id, a.embedding, EntryKind::Asset);
  return index;
}

RetrievalHit retrieve(const EmbeddingIndex& index, std::string_view query, const Embedder& embedder,
                      std::uint64_t seed, const RetrievalOptions& options) {
  if (index.size() == 0) throw Error(ErrorCode::EmptyIndex, "nothing to retrieve from: registry is empty");
  const Embedding q = embedder.embed_text(query);
  if (index.count(EntryKind::Api) > 0) {
    const auto best = index.top_k(q, 1, EntryKind::Api);
    if (!best.empty() && best.front().score >= options.api_threshold) {
      return {EntryKind::Api, best.front().key, best.front().score, {}};
    }
  }
  if (index.count(EntryKind::Asset) == 0) {
    throw Error(ErrorCode::EmptyIndex, "no API matched '" + std::string(query) + "' and the asset catalog is empty");
  }
  auto candidates = index.top_k(q, 5, EntryKind::Asset);
  const ScoredKey pick = select_top5(candidates, seed);
  return {EntryKind::Asset, pick.key, pick.score, std::move(candidates)};
}

}  // namespace scenesmith
