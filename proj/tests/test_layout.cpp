#include <doctest.h>

#include <cmath>
#include <functional>
#include <set>

#include "scenesmith/core/error.hpp"
#include "scenesmith/core/rng.hpp"
#include "scenesmith/layout/generators.hpp"
#include "scenesmith/layout/relation.hpp"
#include "scenesmith/scene/scene_graph.hpp"
#include "scenesmith/terrain/terrain.hpp"

using namespace scenesmith;

namespace {

Point2 xy(const PlacedItem& item) { return {item.transform.position.x, item.transform.position.y}; }

double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double min_pairwise(const std::vector<PlacedItem>& items) {
  double best = INFINITY;
  for (std::size_t i = 0; i < items.size(); ++i)
    for (std::size_t j = i + 1; j < items.size(); ++j) best = std::min(best, dist(xy(items[i]), xy(items[j])));
  return best;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

Heightfield flat_terrain(double h, double size = 100.0, std::size_t res = 11) {
  TerrainParams p;
  p.size_x = p.size_y = size;
  p.resolution = res;
  p.base_elevation = h;
  return generate_heightfield(p);
}

}  // namespace

TEST_SUITE("layout") {

TEST_CASE("scatter with zero count is empty") {
  const Placement p = scatter({Region::rectangle({0, 0}, {10, 10}), 0, 1.0, 1, {}});
  CHECK(p.items.empty());
  CHECK_FALSE(p.saturated);
}

TEST_CASE("scatter 50 points in 100x100 with separation 5") {
  const Placement p = scatter({Region::rectangle({0, 0}, {100, 100}), 50, 5.0, 7, {}});
  REQUIRE(p.items.size() == 50);
  CHECK_FALSE(p.saturated);
  CHECK(min_pairwise(p.items) >= 5.0);
  for (const auto& it : p.items) {
    CHECK(Region::rectangle({0, 0}, {100, 100}).contains(xy(it)));
    CHECK(it.transform.rotation.z >= 0.0);
    CHECK(it.transform.rotation.z < 360.0);
  }
  CHECK(scatter({Region::rectangle({0, 0}, {100, 100}), 50, 5.0, 7, {}}) == p);
}

TEST_CASE("scatter saturates in a region too small for the separation") {
  const Placement p = scatter({Region::rectangle({0, 0}, {1, 1}), 5, 10.0, 3, {}});
  CHECK(p.items.size() == 1);
  CHECK(p.saturated);
}

TEST_CASE("scatter respects exclusion masks") {
  const Region hole = Region::disc({50, 50}, 30);
  const Placement p = scatter({Region::rectangle({0, 0}, {100, 100}), 40, 2.0, 11, {hole}});
  for (const auto& it : p.items) CHECK_FALSE(hole.contains(xy(it)));
}

TEST_CASE("grid lattice, single cell and jitter bound") {
  const Placement p = grid({{0, 0}, 2, 3, 5.0, 0.0, 0});
  const std::vector<Point2> expected = {{0, 0}, {5, 0}, {10, 0}, {0, 5}, {5, 5}, {10, 5}};
  REQUIRE(p.items.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(xy(p.items[i]) == expected[i]);

  const Placement one = grid({{3, 4}, 1, 1, 5.0, 0.0, 0});
  REQUIRE(one.items.size() == 1);
  CHECK(xy(one.items[0]) == Point2{3, 4});

  const Placement jit = grid({{0, 0}, 4, 4, 5.0, 1.0, 99});
  for (std::size_t i = 0; i < jit.items.size(); ++i) {
    const Point2 site{double(i % 4) * 5.0, double(i / 4) * 5.0};
    CHECK(std::fabs(xy(jit.items[i]).x - site.x) <= 1.0);
    CHECK(std::fabs(xy(jit.items[i]).y - site.y) <= 1.0);
  }
}

TEST_CASE("linear spacing along a straight segment") {
  LinearSpec s;
  s.path = {{0, 0}, {10, 0}};
  s.spacing = 2.5;
  const Placement p = linear(s);
  REQUIRE(p.items.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(std::fabs(xy(p.items[i]).x - 2.5 * double(i)) < 1e-9);
    CHECK(xy(p.items[i]).y == 0.0);
  }

  s.lateral_offset = 1.0;
  const Placement off = linear(s);
  REQUIRE(off.items.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(std::fabs(point_segment_distance(xy(off.items[i]), {0, 0}, {10, 0}) - 1.0) < 1e-9);
    // Perpendicular: the foot of the offset is the on-path point.
    CHECK(std::fabs(xy(off.items[i]).x - xy(p.items[i]).x) < 1e-9);
  }
}

TEST_CASE("linear walk across a corner") {
  LinearSpec s;
  s.path = {{0, 0}, {6, 0}, {6, 8}};
  s.spacing = 7.0;
  const Placement p = linear(s);
  REQUIRE(p.items.size() == 3);
  CHECK(xy(p.items[0]) == Point2{0, 0});
  CHECK(std::fabs(xy(p.items[1]).x - 6.0) < 1e-9);
  CHECK(std::fabs(xy(p.items[1]).y - 1.0) < 1e-9);
  CHECK(std::fabs(xy(p.items[2]).y - 8.0) < 1e-9);
  CHECK(p.items[1].transform.rotation.z == doctest::Approx(90.0));
}

TEST_CASE("linear rejects degenerate paths") {
  LinearSpec s;
  s.path = {{1, 1}, {1, 1}};
  CHECK(code_of([&] { linear(s); }) == ErrorCode::DegeneratePath);
}

TEST_CASE("nested single child equals the child plus a group index") {
  const GridSpec g{{10, 10}, 2, 2, 3.0, 0.0, 0};
  const Placement alone = grid(g);
  const Placement n = nested({Region::rectangle({0, 0}, {50, 50}), {LayoutSpec{g}}});
  REQUIRE(n.items.size() == alone.items.size());
  for (std::size_t i = 0; i < n.items.size(); ++i) {
    CHECK(n.items[i].transform == alone.items[i].transform);
    CHECK(n.items[i].group == std::vector<std::size_t>{0});
  }
}

TEST_CASE("nested disjoint children do not overlap") {
  const ScatterSpec a{Region::rectangle({0, 0}, {20, 20}), 15, 3.0, 1, {}};
  const ScatterSpec b{Region::rectangle({30, 0}, {50, 20}), 15, 3.0, 2, {}};
  const Placement n = nested({Region::rectangle({0, 0}, {50, 20}), {LayoutSpec{a}, LayoutSpec{b}}});
  for (const auto& p : n.items)
    for (const auto& q : n.items)
      if (p.group != q.group) CHECK(dist(xy(p), xy(q)) >= 3.0);
}

TEST_CASE("nested child outside its parent is rejected") {
  const ScatterSpec a{Region::rectangle({40, 40}, {60, 60}), 3, 1.0, 1, {}};
  CHECK(code_of([&] { nested({Region::rectangle({0, 0}, {50, 50}), {LayoutSpec{a}}}); }) ==
        ErrorCode::ChildRegionEscapesParent);
}

TEST_CASE("area fill tiling counts") {
  const Region r = Region::rectangle({0, 0}, {10, 10});
  CHECK(area_fill({r, 2, 2, 0, 0}).items.size() == 25);
  CHECK(area_fill({r, 2, 2, 1, 0}).items.size() == 9);
  const Placement big = area_fill({r, 11, 11, 0, 0});
  CHECK(big.items.empty());
  CHECK(big.footprint_too_large);
  // A quarter turn swaps the footprint axes.
  CHECK(area_fill({r, 4, 1, 0, 90}).items.size() == area_fill({r, 1, 4, 0, 0}).items.size());
}

TEST_CASE("layout spec JSON round trip") {
  LinearSpec lin;
  lin.circle = CirclePath{{5, 5}, 3, 6};
  const std::vector<LayoutSpec> specs = {
      {ScatterSpec{Region::disc({0, 0}, 10, 2), 4, 1.5, 9, {Region::rectangle({-1, -1}, {1, 1})}}},
      {GridSpec{{1, 2}, 3, 4, 2.5, 0.5, 8}},
      {lin},
      {NestedSpec{Region::rectangle({0, 0}, {10, 10}), {LayoutSpec{GridSpec{{1, 1}, 2, 2, 1, 0, 0}}}}},
      {AreaFillSpec{Region::polygon({{0, 0}, {10, 0}, {0, 10}}), 1, 2, 0.5, 90}}};
  for (const auto& s : specs) CHECK(layout_spec_from_json(layout_spec_to_json(s)) == s);
  CHECK_THROWS_AS(layout_spec_from_json({{"kind", "spiral"}}), SchemaError);
}

TEST_CASE("near relation places points in the requested annulus") {
  SceneGraph scene;
  AssetInstance anchor;
  anchor.id = "well_0000";
  anchor.asset_ref = "well_stone";
  scene.add_instance(anchor);
  SpatialRelation rel{"bench", "well_0000", RelationKind::Near,
                      {{"count", 4}, {"min_distance", 3}, {"max_distance", 5}, {"min_separation", 1}}};
  const ResolvedRelation r = resolve_relation(rel, scene, {5});
  const Placement p = generate_layout(r.spec);
  REQUIRE(p.items.size() == 4);
  for (const auto& it : p.items) {
    const double d = std::hypot(it.transform.position.x, it.transform.position.y);
    CHECK(d >= 3.0);
    CHECK(d <= 5.0);
  }
  CHECK_FALSE(r.project_to_terrain);
}

TEST_CASE("surround relation puts points at equal angles") {
  SceneGraph scene;
  scene.set_region("plaza", Region::disc({20, 30}, 5));
  SpatialRelation rel{"lamp", "plaza", RelationKind::Surround, {{"count", 4}, {"radius", 10}}};
  const Placement p = generate_layout(resolve_relation(rel, scene, {}).spec);
  REQUIRE(p.items.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    const double dx = p.items[k].transform.position.x - 20, dy = p.items[k].transform.position.y - 30;
    CHECK(std::fabs(std::hypot(dx, dy) - 10.0) < 1e-6);
    const double expected = double(k) * M_PI / 2.0;
    CHECK(std::fabs(std::atan2(std::sin(std::atan2(dy, dx) - expected), std::cos(std::atan2(dy, dx) - expected))) < 1e-9);
  }
}

TEST_CASE("avoid covering the whole domain saturates with nothing placed") {
  SceneGraph scene;
  scene.set_terrain(flat_terrain(0.0));
  scene.set_region("everything", Region::rectangle({-10, -10}, {110, 110}));
  SpatialRelation rel{"tent", "everything", RelationKind::Avoid, {{"count", 5}}};
  const ResolvedRelation r = resolve_relation(rel, scene, {1});
  const Placement p = generate_layout(r.spec);
  CHECK(p.items.empty());
  CHECK(p.saturated);
}

TEST_CASE("relation errors") {
  SceneGraph scene;
  CHECK(code_of([&] { resolve_relation({"a", "nowhere", RelationKind::Near, {}}, scene, {}); }) ==
        ErrorCode::UnknownAnchor);
  CHECK(code_of([] { parse_relation_kind("besideish"); }) == ErrorCode::UnsupportedRelation);
  scene.set_region("lake", Region::disc({0, 0}, 5));
  CHECK(code_of([&] {
          resolve_relation({"a", "lake", RelationKind::Near, {{"min_distance", 5}, {"max_distance", 2}}}, scene, {});
        }) == ErrorCode::InvalidParams);
}

TEST_CASE("projection onto a flat terrain and at grid nodes") {
  const Placement p = grid({{0, 0}, 3, 3, 10.0, 0.0, 0});
  const Placement flat = project_to_terrain(p, flat_terrain(10.0));
  for (const auto& it : flat.items) CHECK(it.transform.position.z == 10.0);

  TerrainParams tp;
  tp.size_x = tp.size_y = 100;
  tp.resolution = 11;
  tp.roughness = 0.8;
  tp.elevation_range = 20;
  tp.seed = 4;
  const Heightfield hf = generate_heightfield(tp);
  const Placement nodes = project_to_terrain(p, hf);
  for (std::size_t k = 0; k < nodes.items.size(); ++k)
    CHECK(nodes.items[k].transform.position.z == hf.at(k % 3, k / 3));
}

TEST_CASE("projection drops points off the terrain") {
  const Placement p = grid({{90, 90}, 1, 3, 10.0, 0.0, 0});
  const Placement out = project_to_terrain(p, flat_terrain(1.0));
  CHECK(out.items.size() == 2);
  CHECK(out.dropped == 1);
  CHECK(out.out_of_bounds);
}

TEST_CASE("projection matches an independent bilinear oracle") {
  TerrainParams tp;
  tp.size_x = tp.size_y = 100;
  tp.resolution = 17;
  tp.roughness = 0.6;
  tp.elevation_range = 25;
  tp.seed = 21;
  const Heightfield hf = generate_heightfield(tp);
  const Placement p = project_to_terrain(scatter({Region::rectangle({0, 0}, {100, 100}), 100, 0.5, 3, {}}), hf);
  REQUIRE(p.items.size() == 100);
  const double c = 100.0 / 16.0;
  for (const auto& it : p.items) {
    const double x = it.transform.position.x, y = it.transform.position.y;
    const auto i = std::min<std::size_t>(std::size_t(x / c), 15), j = std::min<std::size_t>(std::size_t(y / c), 15);
    const double tx = x / c - double(i), ty = y / c - double(j);
    const double oracle = hf.at(i, j) * (1 - tx) * (1 - ty) + hf.at(i + 1, j) * tx * (1 - ty) +
                          hf.at(i, j + 1) * (1 - tx) * ty + hf.at(i + 1, j + 1) * tx * ty;
    CHECK(std::fabs(it.transform.position.z - oracle) < 1e-9);
  }
}

}
