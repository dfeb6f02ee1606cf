#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenesmith/scene/region.hpp"
#include "scenesmith/terrain/heightfield.hpp"

namespace scenesmith {

struct Valley {
  std::vector<Point2> path;  // polyline in world XY
  double depth = 0.0;        // meters, >= 0
  double width = 1.0;        // meters, > 0

  friend bool operator==(const Valley&, const Valley&) = default;
};

struct TerrainParams {
  double size_x = 150.0;
  double size_y = 150.0;
  std::size_t resolution = 129;
  double base_elevation = 0.0;
  double elevation_range = 0.0;
  double slope = 0.0;             // rise over run
  double slope_direction = 0.0;   // degrees, counter-clockwise from +X
  double roughness = 0.0;         // [0, 1]
  std::uint32_t octaves = 4;
  std::optional<Valley> valley;
  std::uint64_t seed = 0;
  std::set<std::string> tags;

  friend bool operator==(const TerrainParams&, const TerrainParams&) = default;
};

/// Throws InvalidParams.
void validate_terrain_params(const TerrainParams& p);

/// h(x, y) = base + slope * (cos(dir) x + sin(dir) y) + elevation_range * fbm(x, y) - carve(x, y)
///
/// fbm = roughness * sum_o w_o * value_noise(x f_o, y f_o, o, seed), w_o = r^o / sum_k r^k with
/// r = roughness and f_o = 2^o * 4 / max(size_x, size_y). roughness = 0 yields exactly the
/// inclined plane. Deterministic per parameters.
Heightfield generate_heightfield(const TerrainParams& p);

/// Bilinear interpolation of the four surrounding nodes; exact at nodes.
/// Throws OutOfBounds outside [0, size_x] x [0, size_y].
double sample_height(const Heightfield& hf, double x, double y);

/// 1 - smoothstep(t) for t in [0, 1), 0 beyond.
double valley_falloff(double t);

/// Lowers every node by depth * valley_falloff(d / width), d = distance to the path.
/// Throws InvalidParams for a bad width/depth or a path leaving the terrain.
Heightfield carve_valley(Heightfield hf, const std::vector<Point2>& path, double depth, double width);

nlohmann::json terrain_params_to_json(const TerrainParams& p);
TerrainParams terrain_params_from_json(const nlohmann::json& j);

}  // namespace scenesmith
