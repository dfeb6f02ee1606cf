#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scenesmith/core/error.hpp"
#include "scenesmith/core/rng.hpp"
#include "scenesmith/scene/geometry.hpp"
#include "scenesmith/scene/region.hpp"
#include "scenesmith/scene/scene_graph.hpp"
#include "scenesmith/scene/scene_io.hpp"
#include "scenesmith/terrain/terrain.hpp"

using namespace scenesmith;

namespace {

AssetInstance make_instance(const std::string& id, double x, double y) {
  AssetInstance inst;
  inst.id = id;
  inst.asset_ref = "rock_small";
  inst.transform.position = {x, y, 0.0};
  inst.tags = {"object:rock"};
  return inst;
}

SceneGraph random_scene(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  SceneGraph scene(seed);
  for (std::size_t i = 0; i < n; ++i) {
    AssetInstance inst;
    inst.id = scene.next_id(i % 3 == 0 ? "tree" : "rock");
    inst.asset_ref = i % 2 == 0 ? "plugin:tree" : "rock_large";
    inst.transform.position = {rng.uniform(-500, 500), rng.uniform(-500, 500), rng.uniform(-20, 80)};
    inst.transform.rotation = {rng.uniform(-360, 360), rng.uniform(-360, 360), rng.uniform(-360, 360)};
    inst.transform.scale = {rng.uniform(0.01, 5), rng.uniform(0.01, 5), rng.uniform(0.01, 5)};
    inst.tags = {"object:x", "param:height=" + format_double(rng.uniform(1, 50))};
    inst.terrain_projected = rng.below(2) == 1;
    scene.add_instance(inst);
  }
  return scene;
}

std::size_t count_prefix(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

}  // namespace

TEST_SUITE("scene") {

TEST_CASE("add_instance grows the scene and rejects duplicate ids") {
  SceneGraph scene;
  scene.add_instance(make_instance("a", 0, 0));
  CHECK(scene.size() == 1);
  CHECK(scene.find("a") != nullptr);
  CHECK_THROWS_AS(scene.add_instance(make_instance("a", 1, 1)), Error);
  try {
    scene.add_instance(make_instance("a", 1, 1));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateId);
  }
  CHECK(scene.size() == 1);
}

TEST_CASE("appending the 500th instance leaves the first 499 unchanged in the export") {
  SceneGraph scene = random_scene(3, 499);
  const nlohmann::json before = nlohmann::json::parse(export_scene(scene, SceneFormat::SceneJson));
  scene.add_instance(make_instance("extra_0001", 1, 2));
  const nlohmann::json after = nlohmann::json::parse(export_scene(scene, SceneFormat::SceneJson));
  REQUIRE(after.at("instances").size() == 500);
  for (std::size_t i = 0; i < 499; ++i) CHECK(after["instances"][i].dump() == before["instances"][i].dump());
}

TEST_CASE("transforms are validated on insert") {
  SceneGraph scene;
  auto bad = make_instance("b", 0, 0);
  bad.transform.scale.x = 0.0;
  CHECK_THROWS_AS(scene.add_instance(bad), Error);
  bad = make_instance("c", NAN, 0);
  CHECK_THROWS_AS(scene.add_instance(bad), Error);
}

TEST_CASE("next_id fills the smallest free slot") {
  SceneGraph scene;
  CHECK(scene.next_id("rock") == "rock_0000");
  scene.add_instance(make_instance("rock_0000", 0, 0));
  scene.add_instance(make_instance("rock_0002", 0, 0));
  CHECK(scene.next_id("rock") == "rock_0001");
}

TEST_CASE("aabb of simple point sets") {
  const std::vector<Vec3> origin = {{0, 0, 0}};
  const Aabb a = compute_aabb(origin);
  CHECK(a.min == Vec3{0, 0, 0});
  CHECK(a.max == Vec3{0, 0, 0});

  std::vector<Vec3> cube;
  for (int i = 0; i < 8; ++i) cube.push_back({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
  const Aabb c = compute_aabb(cube);
  CHECK(c.min == Vec3{0, 0, 0});
  CHECK(c.max == Vec3{1, 1, 1});
  CHECK_THROWS_AS(compute_aabb(std::vector<Vec3>{}), Error);
}

TEST_CASE("aabb matches an independent scan over 1000 random points") {
  Rng rng(99);
  std::vector<Vec3> pts(1000);
  for (auto& p : pts) p = {rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4)};
  Vec3 lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const Aabb box = compute_aabb(pts);
  CHECK(box.min == lo);
  CHECK(box.max == hi);
}

TEST_CASE("framing camera distance for the unit cube") {
  const Aabb cube{{0, 0, 0}, {1, 1, 1}};
  const FramingCamera cam = compute_framing_camera(cube, 60.0, 1.0, {0, 1, -0.5});
  CHECK(std::fabs(cam.distance - 1.7321) < 1e-4);
  CHECK(std::fabs(cam.distance - std::sqrt(3.0) / 2.0 / 0.5) < 1e-12);
  const FramingCamera wide = compute_framing_camera(cube, 60.0, 2.0, {0, 1, -0.5});
  CHECK(wide.distance == doctest::Approx(2.0 * cam.distance));
  CHECK_FALSE(cam.degenerate);
}

TEST_CASE("framing camera targets the box center and looks at it") {
  const Aabb box{{10, -4, 2}, {14, 0, 5}};
  const Vec3 dir{1, 2, -1};
  const FramingCamera cam = compute_framing_camera(box, 45.0, 1.2, dir);
  CHECK(cam.target == box.center());
  const Vec3 offset = cam.target - cam.transform.position;
  CHECK(offset.norm() == doctest::Approx(cam.distance));
  // Local -Z rotated into world space points along the view direction.
  double m[9];
  euler_xyz_to_matrix(cam.transform.rotation, m);
  const Vec3 forward{-m[2], -m[5], -m[8]};
  const Vec3 unit = dir * (1.0 / dir.norm());
  CHECK(forward.x == doctest::Approx(unit.x));
  CHECK(forward.y == doctest::Approx(unit.y));
  CHECK(forward.z == doctest::Approx(unit.z));
}

TEST_CASE("framing camera degenerate box and argument checks") {
  const Aabb point{{1, 1, 1}, {1, 1, 1}};
  const FramingCamera cam = compute_framing_camera(point, 60.0, 1.0, {0, 0, -1});
  CHECK(cam.degenerate);
  CHECK(cam.radius == kDegenerateRadius);
  CHECK_THROWS_AS(compute_framing_camera(point, 0.0, 1.0, {0, 0, -1}), Error);
  CHECK_THROWS_AS(compute_framing_camera(point, 60.0, 0.5, {0, 0, -1}), Error);
  CHECK_THROWS_AS(compute_framing_camera(point, 60.0, 1.0, {0, 0, 0}), Error);
}

TEST_CASE("empty scene exports an empty instance list and keeps its seed") {
  const SceneGraph scene(1234);
  const nlohmann::json j = nlohmann::json::parse(export_scene(scene, SceneFormat::SceneJson));
  CHECK(j.at("instances").empty());
  CHECK(j.at("seed") == 1234);
  CHECK(import_scene_json(export_scene(scene, SceneFormat::SceneJson)) == scene);
}

TEST_CASE("scene-json export, import, export is byte-identical") {
  SceneGraph scene = random_scene(17, 50);
  TerrainParams tp;
  tp.resolution = 9;
  tp.roughness = 0.6;
  tp.elevation_range = 12;
  tp.seed = 5;
  tp.tags = {"grass"};
  scene.set_terrain(generate_heightfield(tp));
  scene.set_region("lake", Region::disc({75, 75}, 20));
  scene.set_region("field", Region::polygon({{0, 0}, {10, 0}, {10, 10}, {0, 10}}));
  scene.metadata()["query"] = "a pine forest";
  const std::string first = export_scene(scene, SceneFormat::SceneJson);
  const SceneGraph back = import_scene_json(first);
  CHECK(back == scene);
  CHECK(export_scene(back, SceneFormat::SceneJson) == first);
  CHECK(first.back() == '\n');
}

TEST_CASE("obj export has one proxy box per instance and resolution^2 terrain vertices") {
  SceneGraph scene(1);
  TerrainParams tp;
  tp.resolution = 5;
  tp.base_elevation = 2;
  scene.set_terrain(generate_heightfield(tp));
  for (int i = 0; i < 3; ++i) scene.add_instance(make_instance("rock_000" + std::to_string(i), i, i));
  const std::string obj = export_scene(scene, SceneFormat::Obj);
  CHECK(count_prefix(obj, "v ") == 25 + 3 * 8);
  CHECK(count_prefix(obj, "o ") == 1 + 3);
  CHECK(count_prefix(obj, "f ") == 4 * 4 * 2 + 3 * 6);
}

TEST_CASE("scene-json rejects unknown schema versions") {
  nlohmann::json j = nlohmann::json::parse(export_scene(SceneGraph(1), SceneFormat::SceneJson));
  j["schema"] = "scene/0";
  try {
    scene_from_json(j);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::VersionUnsupported);
  }
}

TEST_CASE("region containment") {
  const Region rect = Region::rectangle({0, 0}, {10, 10});
  CHECK(rect.contains({10, 10}));
  CHECK_FALSE(rect.contains({10.001, 5}));
  const Region ring = Region::disc({0, 0}, 5, 3);
  CHECK(ring.contains({4, 0}));
  CHECK_FALSE(ring.contains({1, 0}));
  const Region tri = Region::polygon({{0, 0}, {4, 0}, {0, 4}});
  CHECK(tri.contains({1, 1}));
  CHECK_FALSE(tri.contains({3, 3}));
  CHECK(rect.contains_region(Region::disc({5, 5}, 4)));
  CHECK_FALSE(rect.contains_region(Region::disc({5, 5}, 6)));
  CHECK_THROWS_AS(Region::polygon({{0, 0}, {4, 4}, {4, 0}, {0, 4}}).validate(), Error);
}

}
