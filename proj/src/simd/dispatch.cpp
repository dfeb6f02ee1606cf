#include <cstdlib>
#include <string>

#include "scenesmith/core/error.hpp"
#include "scenesmith/simd/kernels.hpp"

namespace scenesmith::simd {

namespace detail {
#ifndef SCENESMITH_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif
#ifndef SCENESMITH_HAVE_NEON
const KernelTable* neon_kernels() { return nullptr; }
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(SCENESMITH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& select_active() {
  if (const char* forced = std::getenv("SCENESMITH_SIMD")) {
    if (std::string(forced) == "scalar") return scalar_kernels();
  }
  if (cpu_has_avx2()) return *detail::avx2_kernels();
  if (const KernelTable* neon = detail::neon_kernels()) return *neon;
  return scalar_kernels();
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::Scalar};
  if (cpu_has_avx2()) out.push_back(Isa::Avx2);
  if (detail::neon_kernels() != nullptr) out.push_back(Isa::Neon);
  return out;
}

const KernelTable& kernels_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return scalar_kernels();
    case Isa::Avx2:
      if (cpu_has_avx2()) return *detail::avx2_kernels();
      break;
    case Isa::Neon:
      if (const KernelTable* neon = detail::neon_kernels()) return *neon;
      break;
  }
  throw Error(ErrorCode::InvalidArgument,
              "SIMD variant '" + std::string(isa_name(isa)) + "' is not available");
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select_active();
  return table;
}

}  // namespace scenesmith::simd
