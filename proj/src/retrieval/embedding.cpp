#include "scenesmith/retrieval/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scenesmith/core/error.hpp"
#include "scenesmith/simd/kernels.hpp"

namespace scenesmith {

Embedding Embedding::normalized(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "embedding must be non-empty");
  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "embedding has non-finite values");
    sum += v * v;
  }
  if (!(sum > 0.0)) throw Error(ErrorCode::InvalidArgument, "cannot normalise a zero embedding");
  const double n = std::sqrt(sum);
  for (double& v : values) v /= n;
  return Embedding(std::move(values));
}

Embedding Embedding::from_unit(std::vector<double> values) {
  Embedding e(std::move(values));
  const double n = e.norm();
  if (e.values_.empty() || !(std::abs(n - 1.0) <= kUnitNormTolerance)) {
    throw SchemaError("embedding", "L2 norm " + std::to_string(n) + " is not 1 +- 1e-6");
  }
  return e;
}

double Embedding::norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "embedding dimensions differ: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  const double d = simd::active_kernels().dot(a.data(), b.data(), a.dim());
  return std::clamp(d, -1.0, 1.0);
}

}  // namespace scenesmith
