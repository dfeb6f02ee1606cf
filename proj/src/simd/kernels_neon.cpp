#include <arm_neon.h>

#include "scenesmith/simd/kernels.hpp"

namespace scenesmith::simd {
namespace {

// Two float64x2 accumulators hold lanes {0,1} and {2,3} of the scalar reference.
double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double lane[4];
  vst1q_f64(lane, lo);
  vst1q_f64(lane + 2, hi);
  for (; i < n; ++i) {
    const double p = a[i] * b[i];
    lane[i % 4] = lane[i % 4] + p;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void dot_rows_neon(const double* rows, std::size_t count, std::size_t dim, const double* query,
                   double* out) {
  for (std::size_t r = 0; r < count; ++r) out[r] = dot_neon(rows + r * dim, query, dim);
}

bool any_within_neon(const double* xs, const double* ys, std::size_t n, double px, double py,
                     double r2) {
  const float64x2_t vpx = vdupq_n_f64(px);
  const float64x2_t vpy = vdupq_n_f64(py);
  const float64x2_t vr2 = vdupq_n_f64(r2);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), vpx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), vpy);
    const float64x2_t d2 = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
    const uint64x2_t lt = vcltq_f64(d2, vr2);
    if ((vgetq_lane_u64(lt, 0) | vgetq_lane_u64(lt, 1)) != 0) return true;
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - px;
    const double dy = ys[i] - py;
    const double d2 = dx * dx + dy * dy;
    if (d2 < r2) return true;
  }
  return false;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) {
    const double p = a * x[i];
    y[i] = y[i] + p;
  }
}

const KernelTable kNeon{Isa::Neon, dot_neon, dot_rows_neon, any_within_neon, axpy_neon};

}  // namespace

namespace detail {
const KernelTable* neon_kernels() { return &kNeon; }
}  // namespace detail

}  // namespace scenesmith::simd
