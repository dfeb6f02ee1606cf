#pragma once

// Data-parallel inner loops with a scalar reference and ISA-specific variants.
//
// Every variant must return the same bits as the scalar reference. The reference is
// written in "lane order": dot products keep four partial sums (element i goes to lane
// i % 4) and reduce them as (l0 + l1) + (l2 + l3). Vector variants use separate multiply
// and add instructions, never FMA.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace scenesmith::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  /// sum_i a[i] * b[i] in lane order.
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// out[r] = dot(rows + r * dim, query, dim) for r in [0, count).
  void (*dot_rows)(const double* rows, std::size_t count, std::size_t dim, const double* query,
                   double* out);
  /// True iff some i has (xs[i]-px)^2 + (ys[i]-py)^2 < r2.
  bool (*any_within)(const double* xs, const double* ys, std::size_t n, double px, double py,
                     double r2);
  /// y[i] += a * x[i].
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_kernels();

/// Variants compiled in and supported by the running CPU (scalar always first).
std::vector<Isa> available_isas();

/// Throws InvalidArgument if the ISA is not available on this machine.
const KernelTable& kernels_for(Isa isa);

/// Selected once per process: best available ISA unless SCENESMITH_SIMD=scalar.
const KernelTable& active_kernels();

namespace detail {
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();
}  // namespace detail

}  // namespace scenesmith::simd
