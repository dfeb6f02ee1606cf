#include "scenesmith/simd/kernels.hpp"

namespace scenesmith::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double p = a[i] * b[i];
    lane[i % 4] = lane[i % 4] + p;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void dot_rows_scalar(const double* rows, std::size_t count, std::size_t dim, const double* query,
                     double* out) {
  for (std::size_t r = 0; r < count; ++r) out[r] = dot_scalar(rows + r * dim, query, dim);
}

bool any_within_scalar(const double* xs, const double* ys, std::size_t n, double px, double py,
                       double r2) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - px;
    const double dy = ys[i] - py;
    const double d2 = dx * dx + dy * dy;
    if (d2 < r2) return true;
  }
  return false;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double p = a * x[i];
    y[i] = y[i] + p;
  }
}

const KernelTable kScalar{Isa::Scalar, dot_scalar, dot_rows_scalar, any_within_scalar, axpy_scalar};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace scenesmith::simd
