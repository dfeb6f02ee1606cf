#include <doctest.h>

#include <cmath>
#include <cstring>

#include "scenesmith/core/error.hpp"
#include "scenesmith/core/rng.hpp"
#include "scenesmith/terrain/noise.hpp"
#include "scenesmith/terrain/terrain.hpp"

using namespace scenesmith;

namespace {

TerrainParams flat(double base, std::size_t resolution = 65, double size = 150.0) {
  TerrainParams p;
  p.size_x = p.size_y = size;
  p.resolution = resolution;
  p.base_elevation = base;
  return p;
}

// Bilinear interpolation written independently of the library.
double bilinear_oracle(const Heightfield& hf, double x, double y) {
  const double fx = x / hf.size_x * double(hf.resolution - 1);
  const double fy = y / hf.size_y * double(hf.resolution - 1);
  std::size_t i = std::min<std::size_t>(std::size_t(fx), hf.resolution - 2);
  std::size_t j = std::min<std::size_t>(std::size_t(fy), hf.resolution - 2);
  const double tx = fx - double(i), ty = fy - double(j);
  return hf.at(i, j) * (1 - tx) * (1 - ty) + hf.at(i + 1, j) * tx * (1 - ty) + hf.at(i, j + 1) * (1 - tx) * ty +
         hf.at(i + 1, j + 1) * tx * ty;
}

}  // namespace

TEST_SUITE("terrain") {

TEST_CASE("flat terrain is exactly the base elevation") {
  const Heightfield hf = generate_heightfield(flat(10.0));
  for (double h : hf.heights) CHECK(h == 10.0);
}

TEST_CASE("roughness zero gives the requested plane") {
  TerrainParams p = flat(3.0, 101, 100.0);
  p.slope = 0.1;
  p.slope_direction = 0.0;
  p.elevation_range = 20.0;
  const Heightfield hf = generate_heightfield(p);
  for (std::size_t j = 0; j < hf.resolution; ++j) {
    for (std::size_t i = 0; i < hf.resolution; ++i) {
      CHECK(std::fabs(hf.at(i, j) - hf.at(0, j) - 0.1 * hf.node_x(i)) < 1e-9);
    }
  }
}

TEST_CASE("finite-difference gradient matches an oblique plane") {
  TerrainParams p = flat(-4.0, 129, 200.0);
  p.slope = 0.25;
  p.slope_direction = 30.0;
  const Heightfield hf = generate_heightfield(p);
  const double gx = 0.25 * std::cos(30.0 * M_PI / 180.0), gy = 0.25 * std::sin(30.0 * M_PI / 180.0);
  for (std::size_t j = 0; j + 1 < hf.resolution; j += 7) {
    for (std::size_t i = 0; i + 1 < hf.resolution; i += 5) {
      CHECK(std::fabs((hf.at(i + 1, j) - hf.at(i, j)) / hf.cell_x() - gx) < 1e-6);
      CHECK(std::fabs((hf.at(i, j + 1) - hf.at(i, j)) / hf.cell_y() - gy) < 1e-6);
    }
  }
}

TEST_CASE("seeded rough terrain is byte-identical across runs") {
  TerrainParams p = flat(0.0, 129);
  p.roughness = 0.5;
  p.elevation_range = 30.0;
  p.seed = 42;
  const Heightfield a = generate_heightfield(p), b = generate_heightfield(p);
  REQUIRE(a.heights.size() == b.heights.size());
  CHECK(std::memcmp(a.heights.data(), b.heights.data(), a.heights.size() * sizeof(double)) == 0);
  p.seed = 43;
  CHECK(generate_heightfield(p).heights != a.heights);
}

TEST_CASE("fbm stays within the elevation range") {
  TerrainParams p = flat(0.0, 65);
  p.roughness = 1.0;
  p.elevation_range = 10.0;
  p.seed = 9;
  for (double h : generate_heightfield(p).heights) {
    CHECK(h >= -10.0);
    CHECK(h <= 10.0);
  }
}

TEST_CASE("value noise agrees with its lattice at integer coordinates") {
  for (int ix = -3; ix < 3; ++ix) {
    for (int iy = -3; iy < 3; ++iy) {
      CHECK(noise::value_noise(ix, iy, 2, 77) == noise::lattice_value(ix, iy, 2, 77));
      const double v = noise::lattice_value(ix, iy, 0, 1);
      CHECK(v >= -1.0);
      CHECK(v < 1.0);
    }
  }
  CHECK(noise::fade(0.0) == 0.0);
  CHECK(noise::fade(1.0) == 1.0);
  CHECK(noise::fade(0.5) == 0.5);
}

TEST_CASE("sample_height at nodes, cell centres and outside") {
  Heightfield hf;
  hf.resolution = 2;
  hf.size_x = hf.size_y = 1.0;
  hf.heights = {0, 0, 0, 4};
  CHECK(sample_height(hf, 0.5, 0.5) == 1.0);
  CHECK(sample_height(hf, 1.0, 1.0) == 4.0);
  CHECK_THROWS_AS(sample_height(hf, 1.5, 0.5), Error);

  TerrainParams p = flat(0.0, 33, 64.0);
  p.roughness = 0.7;
  p.elevation_range = 15.0;
  p.seed = 3;
  const Heightfield rough = generate_heightfield(p);
  for (std::size_t j = 0; j < rough.resolution; j += 3)
    for (std::size_t i = 0; i < rough.resolution; i += 3) CHECK(sample_height(rough, rough.node_x(i), rough.node_y(j)) == rough.at(i, j));
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const double x = rng.uniform(0, 64), y = rng.uniform(0, 64);
    CHECK(std::fabs(sample_height(rough, x, y) - bilinear_oracle(rough, x, y)) < 1e-9);
  }
}

TEST_CASE("valley lowers the centreline by exactly its depth") {
  TerrainParams p = flat(20.0, 151, 150.0);
  p.valley = Valley{{{0, 75}, {150, 75}}, 6.0, 10.0};
  const Heightfield hf = generate_heightfield(p);
  for (std::size_t i = 0; i < hf.resolution; ++i) CHECK(hf.at(i, 75) == 14.0);
  for (std::size_t i = 0; i < hf.resolution; ++i) {
    CHECK(hf.at(i, 60) == 20.0);
    CHECK(hf.at(i, 90) == 20.0);
  }
}

TEST_CASE("valley depth is non-increasing along a perpendicular transect") {
  TerrainParams p = flat(0.0, 151, 150.0);
  p.valley = Valley{{{20, 20}, {130, 130}}, 8.0, 25.0};
  const Heightfield base = generate_heightfield(flat(0.0, 151, 150.0));
  const Heightfield hf = generate_heightfield(p);
  double prev = 8.0 + 1e-12;
  for (double t = 0.0; t <= 30.0; t += 0.5) {
    const double x = 75.0 + t / std::sqrt(2.0), y = 75.0 - t / std::sqrt(2.0);
    const double depth = sample_height(base, x, y) - sample_height(hf, x, y);
    CHECK(depth <= prev + 1e-9);
    prev = depth;
  }
  CHECK(valley_falloff(0.0) == 1.0);
  CHECK(valley_falloff(1.0) == 0.0);
}

TEST_CASE("terrain parameter validation and JSON round trip") {
  TerrainParams p = flat(0.0);
  p.roughness = 1.5;
  CHECK_THROWS_AS(validate_terrain_params(p), Error);
  p = flat(0.0);
  p.resolution = 1;
  CHECK_THROWS_AS(validate_terrain_params(p), Error);
  p = flat(0.0);
  p.valley = Valley{{{0, 0}, {200, 0}}, 1.0, 1.0};
  CHECK_THROWS_AS(validate_terrain_params(p), Error);
  p.valley = Valley{{{0, 0}, {100, 20}}, 1.0, 4.0};
  p.tags = {"snow"};
  p.seed = 0xfffffffffffffULL;
  CHECK(terrain_params_from_json(terrain_params_to_json(p)) == p);
}

}
