#include <immintrin.h>

#include "scenesmith/simd/kernels.hpp"

namespace scenesmith::simd {
namespace {

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, p);
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  // Tail elements continue into the lanes they would occupy in the scalar reference.
  for (; i < n; ++i) {
    const double p = a[i] * b[i];
    lane[i % 4] = lane[i % 4] + p;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void dot_rows_avx2(const double* rows, std::size_t count, std::size_t dim, const double* query,
                   double* out) {
  for (std::size_t r = 0; r < count; ++r) out[r] = dot_avx2(rows + r * dim, query, dim);
}

bool any_within_avx2(const double* xs, const double* ys, std::size_t n, double px, double py,
                     double r2) {
  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  const __m256d vr2 = _mm256_set1_pd(r2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vpx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vpy);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    if (_mm256_movemask_pd(_mm256_cmp_pd(d2, vr2, _CMP_LT_OQ)) != 0) return true;
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - px;
    const double dy = ys[i] - py;
    const double d2 = dx * dx + dy * dy;
    if (d2 < r2) return true;
  }
  return false;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
  }
  for (; i < n; ++i) {
    const double p = a * x[i];
    y[i] = y[i] + p;
  }
}

const KernelTable kAvx2{Isa::Avx2, dot_avx2, dot_rows_avx2, any_within_avx2, axpy_avx2};

}  // namespace

namespace detail {
const KernelTable* avx2_kernels() { return &kAvx2; }
}  // namespace detail

}  // namespace scenesmith::simd
