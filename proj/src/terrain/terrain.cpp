#include "scenesmith/terrain/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scenesmith/core/error.hpp"
#include "scenesmith/scene/scene_io.hpp"
#include "scenesmith/simd/kernels.hpp"
#include "scenesmith/terrain/noise.hpp"

namespace scenesmith {

using nlohmann::json;

namespace {

constexpr std::uint32_t kMaxOctaves = 16;
constexpr std::size_t kMaxResolution = 4097;

bool finite_all(std::initializer_list<double> vs) {
  return std::all_of(vs.begin(), vs.end(), [](double v) { return std::isfinite(v); });
}

void check_path_inside(const std::vector<Point2>& path, double size_x, double size_y) {
  if (path.size() < 2) throw Error(ErrorCode::InvalidParams, "valley path needs at least two points");
  for (const Point2& p : path) {
    if (!finite_all({p.x, p.y}) || p.x < 0.0 || p.x > size_x || p.y < 0.0 || p.y > size_y) {
      throw Error(ErrorCode::InvalidParams, "valley path leaves the terrain extent");
    }
  }
}

// Node index along one axis; exact when the coordinate is a node coordinate.
std::pair<std::size_t, double> locate(double coord, double cell, std::size_t resolution) {
  const double f = coord / cell;
  const double r = std::round(f);
  if (static_cast<double>(static_cast<std::size_t>(r)) * cell == coord) {
    const auto i = static_cast<std::size_t>(r);
    if (i + 1 >= resolution) return {resolution - 2, 1.0};
    return {i, 0.0};
  }
  const auto i0 = std::min(static_cast<std::size_t>(std::floor(f)), resolution - 2);
  return {i0, std::clamp(f - static_cast<double>(i0), 0.0, 1.0)};
}

}  // namespace

void validate_terrain_params(const TerrainParams& p) {
  if (!finite_all({p.size_x, p.size_y, p.base_elevation, p.elevation_range, p.slope, p.slope_direction, p.roughness})) {
    throw Error(ErrorCode::InvalidParams, "terrain parameters must be finite");
  }
  if (!(p.size_x > 0.0 && p.size_y > 0.0)) throw Error(ErrorCode::InvalidParams, "terrain size must be positive");
  if (p.resolution < 2 || p.resolution > kMaxResolution) {
    throw Error(ErrorCode::InvalidParams, "terrain resolution must be in [2, 4097]");
  }
  if (p.elevation_range < 0.0) throw Error(ErrorCode::InvalidParams, "elevation_range must be >= 0");
  if (p.roughness < 0.0 || p.roughness > 1.0) throw Error(ErrorCode::InvalidParams, "roughness must be in [0, 1]");
  if (p.octaves < 1 || p.octaves > kMaxOctaves) throw Error(ErrorCode::InvalidParams, "octaves must be in [1, 16]");
  if (p.valley) {
    if (!(p.valley->width > 0.0) || !std::isfinite(p.valley->width)) {
      throw Error(ErrorCode::InvalidParams, "valley width must be positive");
    }
    if (!(p.valley->depth >= 0.0) || !std::isfinite(p.valley->depth)) {
      throw Error(ErrorCode::InvalidParams, "valley depth must be >= 0");
    }
    check_path_inside(p.valley->path, p.size_x, p.size_y);
  }
}

Heightfield generate_heightfield(const TerrainParams& p) {
  validate_terrain_params(p);
  Heightfield hf;
  hf.resolution = p.resolution;
  hf.size_x = p.size_x;
  hf.size_y = p.size_y;
  hf.tags = p.tags;
  hf.heights.assign(p.resolution * p.resolution, 0.0);

  const double dir = p.slope_direction * std::numbers::pi / 180.0;
  const double gx = p.slope * std::cos(dir);
  const double gy = p.slope * std::sin(dir);
  const std::size_t n = p.resolution;

  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = hf.node_x(i);

  for (std::size_t j = 0; j < n; ++j) {
    const double y = hf.node_y(j);
    double* row = hf.heights.data() + j * n;
    for (std::size_t i = 0; i < n; ++i) row[i] = p.base_elevation + (gx * xs[i] + gy * y);
  }

  if (p.roughness > 0.0 && p.elevation_range > 0.0) {
    const auto& k = simd::active_kernels();
    const double base_freq = 4.0 / std::max(p.size_x, p.size_y);
    std::vector<double> weights(p.octaves);
    double total = 0.0;
    for (std::uint32_t o = 0; o < p.octaves; ++o) {
      weights[o] = std::pow(p.roughness, static_cast<double>(o));
      total += weights[o];
    }
    const double amplitude = p.elevation_range * p.roughness;
    std::vector<double> us(n), noise_row(n), acc(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double y = hf.node_y(j);
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::uint32_t o = 0; o < p.octaves; ++o) {
        const double f = base_freq * std::ldexp(1.0, static_cast<int>(o));
        for (std::size_t i = 0; i < n; ++i) us[i] = xs[i] * f;
        noise::value_noise_row(us, y * f, o, p.seed, noise_row);
        k.axpy(weights[o] / total, noise_row.data(), acc.data(), n);
      }
      k.axpy(amplitude, acc.data(), hf.heights.data() + j * n, n);
    }
  }

  if (p.valley) hf = carve_valley(std::move(hf), p.valley->path, p.valley->depth, p.valley->width);
  return hf;
}

double sample_height(const Heightfield& hf, double x, double y) {
  if (!(x >= 0.0 && x <= hf.size_x && y >= 0.0 && y <= hf.size_y)) {
    throw Error(ErrorCode::OutOfBounds, "point (" + format_double(x) + ", " + format_double(y) +
                                            ") is outside the terrain extent");
  }
  const auto [i0, tx] = locate(x, hf.cell_x(), hf.resolution);
  const auto [j0, ty] = locate(y, hf.cell_y(), hf.resolution);
  const double h00 = hf.at(i0, j0), h10 = hf.at(i0 + 1, j0);
  const double h01 = hf.at(i0, j0 + 1), h11 = hf.at(i0 + 1, j0 + 1);
  const double bottom = (1.0 - tx) * h00 + tx * h10;
  const double top = (1.0 - tx) * h01 + tx * h11;
  return (1.0 - ty) * bottom + ty * top;
}

double valley_falloff(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  return 1.0 - t * t * (3.0 - 2.0 * t);
}

Heightfield carve_valley(Heightfield hf, const std::vector<Point2>& path, double depth, double width) {
  if (!(width > 0.0) || !std::isfinite(width)) throw Error(ErrorCode::InvalidParams, "valley width must be positive");
  if (!(depth >= 0.0) || !std::isfinite(depth)) throw Error(ErrorCode::InvalidParams, "valley depth must be >= 0");
  check_path_inside(path, hf.size_x, hf.size_y);
  for (std::size_t j = 0; j < hf.resolution; ++j) {
    for (std::size_t i = 0; i < hf.resolution; ++i) {
      const Point2 p{hf.node_x(i), hf.node_y(j)};
      double d = INFINITY;
      for (std::size_t s = 0; s + 1 < path.size(); ++s) d = std::min(d, point_segment_distance(p, path[s], path[s + 1]));
      if (d < width) hf.at(i, j) -= depth * valley_falloff(d / width);
    }
  }
  return hf;
}

json terrain_params_to_json(const TerrainParams& p) {
  json j = {{"size_x", p.size_x},
            {"size_y", p.size_y},
            {"resolution", p.resolution},
            {"base_elevation", p.base_elevation},
            {"elevation_range", p.elevation_range},
            {"slope", p.slope},
            {"slope_direction", p.slope_direction},
            {"roughness", p.roughness},
            {"octaves", p.octaves},
            {"seed", p.seed},
            {"tags", p.tags},
            {"valley", nullptr}};
  if (p.valley) {
    json path = json::array();
    for (const Point2& q : p.valley->path) path.push_back(point2_to_json(q));
    j["valley"] = {{"path", path}, {"depth", p.valley->depth}, {"width", p.valley->width}};
  }
  return j;
}

TerrainParams terrain_params_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("terrain", "expected an object");
  TerrainParams p;
  auto num = [&j](const char* key, double& out) {
    if (!j.contains(key)) throw SchemaError(key, "missing terrain field");
    if (!j.at(key).is_number()) throw SchemaError(key, "expected a number");
    out = j.at(key).get<double>();
  };
  auto unsigned_field = [&j](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_unsigned()) throw SchemaError(key, "expected an unsigned integer");
    return j.at(key).get<std::uint64_t>();
  };
  num("size_x", p.size_x);
  num("size_y", p.size_y);
  p.resolution = unsigned_field("resolution");
  num("base_elevation", p.base_elevation);
  num("elevation_range", p.elevation_range);
  num("slope", p.slope);
  num("slope_direction", p.slope_direction);
  num("roughness", p.roughness);
  p.octaves = static_cast<std::uint32_t>(unsigned_field("octaves"));
  p.seed = unsigned_field("seed");
  if (j.contains("tags")) p.tags = j.at("tags").get<std::set<std::string>>();
  if (j.contains("valley") && !j.at("valley").is_null()) {
    const json& v = j.at("valley");
    Valley valley;
    if (!v.contains("path") || !v.at("path").is_array()) throw SchemaError("valley.path", "expected a polyline");
    for (const json& q : v.at("path")) valley.path.push_back(point2_from_json(q));
    if (!v.contains("depth") || !v.at("depth").is_number()) throw SchemaError("valley.depth", "expected a number");
    if (!v.contains("width") || !v.at("width").is_number()) throw SchemaError("valley.width", "expected a number");
    valley.depth = v.at("depth").get<double>();
    valley.width = v.at("width").get<double>();
    p.valley = std::move(valley);
  }
  return p;
}

}  // namespace scenesmith
