#pragma once

#include <cstdint>
#include <span>

namespace scenesmith::noise {

/// Lattice value in [-1, 1) for integer node (ix, iy) of one octave.
///
///   k = (ix * 0x9E3779B97F4A7C15) ^ (iy * 0xC2B2AE3D27D4EB4F) ^ (octave * 0x165667B19E3779F9)
///   h = mix64(seed ^ mix64(k))               (mix64 = SplitMix64 finalizer, wrapping u64)
///   value = (h >> 11) * 2^-53 * 2 - 1
double lattice_value(std::int64_t ix, std::int64_t iy, std::uint32_t octave, std::uint64_t seed);

/// Quintic fade 6t^5 - 15t^4 + 10t^3.
double fade(double t);

/// Value noise at lattice coordinates (u, v): fade-weighted bilinear blend of the four
/// surrounding lattice values.
double value_noise(double u, double v, std::uint32_t octave, std::uint64_t seed);

/// Evaluates value_noise along one row: out[i] = value_noise(us[i], v, octave, seed).
void value_noise_row(std::span<const double> us, double v, std::uint32_t octave, std::uint64_t seed,
                     std::span<double> out);

}  // namespace scenesmith::noise
