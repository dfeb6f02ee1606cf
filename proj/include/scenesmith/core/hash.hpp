#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace scenesmith {

/// FNV-1a, 64-bit (offset basis 0xcbf29ce484222325, prime 0x100000001b3).
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Lower-case, zero-padded, 16 hex digits.
std::string to_hex64(std::uint64_t value);

/// SplitMix64 finalizer; used to derive independent stream seeds from one run seed.
std::uint64_t mix64(std::uint64_t value) noexcept;

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream + 0x9e3779b97f4a7c15ULL));
}

}  // namespace scenesmith
