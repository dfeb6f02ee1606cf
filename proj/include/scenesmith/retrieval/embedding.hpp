#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace scenesmith {

inline constexpr std::size_t kDefaultEmbeddingDim = 768;
inline constexpr double kUnitNormTolerance = 1e-6;

/// Fixed-dimension, L2-normalised vector.
class Embedding {
 public:
  Embedding() = default;

  /// Scales to unit length. Throws InvalidArgument for an empty, zero or non-finite vector.
  static Embedding normalized(std::vector<double> values);
  /// Accepts a vector already of unit length (within kUnitNormTolerance); throws SchemaError
  /// otherwise.
  static Embedding from_unit(std::vector<double> values);

  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  const double* data() const { return values_.data(); }
  double norm() const;

  friend bool operator==(const Embedding&, const Embedding&) = default;

 private:
  explicit Embedding(std::vector<double> v) : values_(std::move(v)) {}
  std::vector<double> values_;
};

/// Dot product of two unit vectors, clamped to [-1, 1]. Throws DimensionMismatch.
double cosine_similarity(const Embedding& a, const Embedding& b);

}  // namespace scenesmith
