#include "scenesmith/retrieval/index.hpp"

#include <algorithm>

#include "scenesmith/core/error.hpp"
#include "scenesmith/core/rng.hpp"
#include "scenesmith/simd/kernels.hpp"

namespace scenesmith {

void EmbeddingIndex::add(std::string key, const Embedding& e, EntryKind kind) {
  if (e.dim() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "entry '" + key + "' has dimension " + std::to_string(e.dim()) +
                                                  ", index expects " + std::to_string(dim_));
  }
  keys_.push_back(std::move(key));
  kinds_.push_back(kind);
  rows_.insert(rows_.end(), e.values().begin(), e.values().end());
}

std::size_t EmbeddingIndex::count(EntryKind kind) const {
  return static_cast<std::size_t>(std::count(kinds_.begin(), kinds_.end(), kind));
}

std::vector<ScoredKey> EmbeddingIndex::top_k(const Embedding& query, std::size_t k,
                                             std::optional<EntryKind> filter) const {
  if (keys_.empty()) throw Error(ErrorCode::EmptyIndex, "embedding index is empty");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "top_k needs k >= 1");
  if (query.dim() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "query dimension " + std::to_string(query.dim()) +
                                                  " does not match index dimension " + std::to_string(dim_));
  }
  std::vector<double> scores(keys_.size());
  simd::active_kernels().dot_rows(rows_.data(), keys_.size(), dim_, query.data(), scores.data());

  std::vector<std::size_t> order;
  order.reserve(keys_.size());
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    if (!filter || kinds_[i] == *filter) order.push_back(i);
  }
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return keys_[a] < keys_[b];
  };
  const std::size_t n = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(), better);

  std::vector<ScoredKey> out;
  out.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = order[r];
    out.push_back({keys_[i], std::clamp(scores[i], -1.0, 1.0), kinds_[i]});
  }
  return out;
}

const ScoredKey& select_top5(const std::vector<ScoredKey>& ranked, std::uint64_t seed) {
  if (ranked.empty()) throw Error(ErrorCode::EmptyInput, "select_top5 needs at least one candidate");
  Rng rng(seed);
  const std::size_t n = std::min<std::size_t>(5, ranked.size());
  return ranked[rng.below(n)];
}

}  // namespace scenesmith
