#include "scenesmith/terrain/noise.hpp"

#include <cmath>

#include "scenesmith/core/hash.hpp"

namespace scenesmith::noise {

double lattice_value(std::int64_t ix, std::int64_t iy, std::uint32_t octave, std::uint64_t seed) {
  const std::uint64_t k = (static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ULL) ^
                          (static_cast<std::uint64_t>(iy) * 0xC2B2AE3D27D4EB4FULL) ^
                          (static_cast<std::uint64_t>(octave) * 0x165667B19E3779F9ULL);
  const std::uint64_t h = mix64(seed ^ mix64(k));
  return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double value_noise(double u, double v, std::uint32_t octave, std::uint64_t seed) {
  const double fu = std::floor(u);
  const double fv = std::floor(v);
  const auto ix = static_cast<std::int64_t>(fu);
  const auto iy = static_cast<std::int64_t>(fv);
  const double su = fade(u - fu);
  const double sv = fade(v - fv);
  const double a = lattice_value(ix, iy, octave, seed);
  const double b = lattice_value(ix + 1, iy, octave, seed);
  const double c = lattice_value(ix, iy + 1, octave, seed);
  const double d = lattice_value(ix + 1, iy + 1, octave, seed);
  const double bottom = a + (b - a) * su;
  const double top = c + (d - c) * su;
  return bottom + (top - bottom) * sv;
}

void value_noise_row(std::span<const double> us, double v, std::uint32_t octave, std::uint64_t seed,
                     std::span<double> out) {
  for (std::size_t i = 0; i < us.size(); ++i) out[i] = value_noise(us[i], v, octave, seed);
}

}  // namespace scenesmith::noise
