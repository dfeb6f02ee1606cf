#include <doctest.h>

#include <algorithm>

#include "random_fixtures.hpp"
#include "scenesmith/core/error.hpp"
#include "scenesmith/plan/action_plan.hpp"
#include "scenesmith/plan/executor.hpp"
#include "scenesmith/scene/scene_io.hpp"
#include "support.hpp"

using namespace scenesmith;
using nlohmann::json;

namespace {

GenerateTerrainAction flat_terrain_action(const std::string& id, double h) {
  TerrainParams p;
  p.size_x = p.size_y = 100;
  p.resolution = 11;
  p.base_elevation = h;
  return {id, p};
}

bool has_diag(const std::vector<Diagnostic>& ds, const std::string& id, const std::string& code) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.action_id == id && d.code == code; });
}

ActionPlan grid_on_flat_plan() {
  ActionPlan plan;
  plan.seed = 1;
  plan.actions.push_back(flat_terrain_action("t", 5.0));
  plan.actions.push_back(ImportAssetAction{"rocks", "rock", "rock_large", 4, "place", {}});
  plan.actions.push_back(PlaceLayoutAction{"place", "rocks", {GridSpec{{10, 10}, 2, 2, 5, 0, 0}}, true});
  return plan;
}

}  // namespace

TEST_SUITE("plan") {

TEST_CASE("empty plan validates and executes to an empty scene") {
  const ActionPlan plan;
  CHECK(validate_plan(plan, test::world().registry).empty());
  const ExecutionResult r = execute_plan(plan, test::world().registry);
  CHECK(r.scene.size() == 0);
  CHECK(r.report.end_flag);
}

TEST_CASE("projection before terrain is an ordering diagnostic") {
  ActionPlan plan;
  plan.actions.push_back(ImportAssetAction{"rocks", "rock", "rock_large", 1, "place", {}});
  plan.actions.push_back(PlaceLayoutAction{"place", "rocks", {GridSpec{{1, 1}, 1, 1, 1, 0, 0}}, true});
  plan.actions.push_back(flat_terrain_action("t", 0));
  CHECK(has_diag(validate_plan(plan, test::world().registry), "place", "ordering"));

  SceneGraph base;
  base.set_terrain(generate_heightfield(flat_terrain_action("t", 1).params));
  ActionPlan edit;
  edit.actions = {plan.actions[0], plan.actions[1]};
  CHECK(validate_plan(edit, test::world().registry, &base).empty());
}

TEST_CASE("unregistered plugins and assets are unresolved references") {
  ActionPlan plan;
  plan.actions.push_back(InvokeApiAction{"a", "dragon", "dragon_generator", {}, 1, {}, {}, {}});
  plan.actions.push_back(ImportAssetAction{"b", "ufo", "ufo_model", 1, {}, {}});
  plan.actions.push_back(InvokeApiAction{"c", "tree", "tree", {{"height", 500}}, 1, {}, {}, {}});
  plan.actions.push_back(ImportAssetAction{"c", "rock", "rock_small", 1, {}, {}});
  const auto ds = validate_plan(plan, test::world().registry);
  CHECK(has_diag(ds, "a", "unresolved-reference"));
  CHECK(has_diag(ds, "b", "unresolved-reference"));
  CHECK(has_diag(ds, "c", "invalid-params"));
  CHECK(has_diag(ds, "c", "duplicate-id"));
}

TEST_CASE("grid projected onto flat terrain sits at the terrain height") {
  const ActionPlan plan = grid_on_flat_plan();
  CHECK(validate_plan(plan, test::world().registry).empty());
  const ExecutionResult r = execute_plan(plan, test::world().registry);
  REQUIRE(r.scene.size() == 4);
  for (const auto& inst : r.scene.instances()) {
    CHECK(inst.transform.position.z == 5.0);
    CHECK(inst.terrain_projected);
    CHECK(inst.tags.count("object:rock") == 1);
  }
  CHECK(r.report.executed_count() == 3);
}

TEST_CASE("one bad action among three is isolated") {
  ActionPlan plan;
  plan.actions.push_back(ImportAssetAction{"good1", "rock", "rock_small", 2, {}, {}});
  plan.actions.push_back(InvokeApiAction{"bad", "tree", "tree", {{"height", -3}}, 1, {}, {}, {}});
  plan.actions.push_back(InvokeApiAction{"good2", "lake", "lake", {}, 1, {}, {}, Region::disc({5, 5}, 3)});
  const ExecutionResult r = execute_plan(plan, test::world().registry);
  CHECK(r.report.proposed_count() == 3);
  CHECK(r.report.executed_count() == 2);
  CHECK(r.report.failed_count() == 1);
  CHECK_FALSE(r.report.outcomes[1].executed);
  CHECK(r.report.outcomes[1].error_code == "InvalidParams");
  CHECK(r.report.end_flag);
  CHECK(r.scene.size() == 3);
  CHECK(r.scene.regions().count("lake") == 1);
}

TEST_CASE("executing twice gives identical scene-json bytes") {
  ActionPlan plan = grid_on_flat_plan();
  plan.actions.push_back(ImportAssetAction{"trees", "tree", "bush_round", 1, "scatter", {}});
  plan.actions.push_back(
      PlaceLayoutAction{"scatter", "trees", {ScatterSpec{Region::rectangle({0, 0}, {100, 100}), 30, 3, 9, {}}}, true});
  const auto a = export_scene(execute_plan(plan, test::world().registry).scene, SceneFormat::SceneJson);
  const auto b = export_scene(execute_plan(plan, test::world().registry).scene, SceneFormat::SceneJson);
  CHECK(a == b);
}

TEST_CASE("execution on a base scene keeps existing instances") {
  const ExecutionResult first = execute_plan(grid_on_flat_plan(), test::world().registry);
  ActionPlan more;
  more.actions.push_back(ImportAssetAction{"rocks2", "rock", "rock_small", 2, {}, {}});
  const ExecutionResult second = execute_plan(more, test::world().registry, first.scene);
  REQUIRE(second.scene.size() == 6);
  for (std::size_t i = 0; i < 4; ++i) CHECK(second.scene.instances()[i] == first.scene.instances()[i]);
  CHECK(second.scene.instances()[4].id == "rock_0004");
}

TEST_CASE("plan-json round trip") {
  const ActionPlan plan = grid_on_flat_plan();
  const std::string text = serialize_plan(plan);
  CHECK(deserialize_plan(text) == plan);
  CHECK(serialize_plan(deserialize_plan(text)) == text);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ActionPlan p = test::random_plan(s, 10);
    CHECK(deserialize_plan(serialize_plan(p)) == p);
  }
}

TEST_CASE("unknown action kinds and versions are rejected") {
  json j = json::parse(serialize_plan(grid_on_flat_plan()));
  j["actions"][1]["kind"] = "SummonDragon";
  try {
    plan_from_json(j);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("SummonDragon") != std::string::npos);
  }
  j = json::parse(serialize_plan(grid_on_flat_plan()));
  j["schema"] = "plan/0";
  try {
    plan_from_json(j);
    FAIL("expected VersionUnsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::VersionUnsupported);
  }
  try {
    deserialize_plan("{\n\"schema\": \"plan/1\",\n\"actions\": [,]\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("run report JSON round trip") {
  const ExecutionResult r = execute_plan(grid_on_flat_plan(), test::world().registry);
  RunReport report = r.report;
  report.query = "rocks";
  report.log = {"a", "b"};
  report.assumptions = {"x"};
  report.retries = {{"decompose", 1}};
  report.diagnostics = {{"a", "ordering", "m"}};
  CHECK(run_report_from_json(run_report_to_json(report)) == report);
}

TEST_CASE("instance prefixes") {
  CHECK(instance_prefix("Pine Tree") == "pine_tree");
  CHECK(instance_prefix("") == "object");
}

}
