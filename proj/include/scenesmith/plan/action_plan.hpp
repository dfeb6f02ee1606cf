#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "scenesmith/layout/layout_spec.hpp"
#include "scenesmith/registry/registry.hpp"
#include "scenesmith/scene/geometry.hpp"
#include "scenesmith/scene/scene_graph.hpp"
#include "scenesmith/terrain/terrain.hpp"

namespace scenesmith {

inline constexpr std::string_view kPlanSchema = "plan/1";

struct GenerateTerrainAction {
  std::string id;
  TerrainParams params;

  friend bool operator==(const GenerateTerrainAction&, const GenerateTerrainAction&) = default;
};

/// Procedural plugin invocation for one planned object. Without a layout_ref, `count`
/// instances are created at `transform`; with one, the referenced PlaceLayout creates them.
struct InvokeApiAction {
  std::string id;
  std::string object;
  std::string plugin;
  ParamValues params;
  std::size_t count = 1;
  std::optional<std::string> layout_ref;
  std::optional<Transform> transform;
  /// Footprint registered as a scene region named after the object.
  std::optional<Region> region;

  friend bool operator==(const InvokeApiAction&, const InvokeApiAction&) = default;
};

struct ImportAssetAction {
  std::string id;
  std::string object;
  std::string asset;
  std::size_t count = 1;
  std::optional<std::string> layout_ref;
  std::optional<Transform> transform;

  friend bool operator==(const ImportAssetAction&, const ImportAssetAction&) = default;
};

/// Instantiates the object declared by `object_ref` (an InvokeApi or ImportAsset id).
struct PlaceLayoutAction {
  std::string id;
  std::string object_ref;
  LayoutSpec layout;
  bool project_to_terrain = false;

  friend bool operator==(const PlaceLayoutAction&, const PlaceLayoutAction&) = default;
};

using Action = std::variant<GenerateTerrainAction, InvokeApiAction, ImportAssetAction, PlaceLayoutAction>;

std::string_view action_kind_name(const Action& a);
const std::string& action_id(const Action& a);

struct ActionPlan {
  std::uint64_t seed = 0;
  std::vector<Action> actions;

  const Action* find(std::string_view id) const;

  friend bool operator==(const ActionPlan&, const ActionPlan&) = default;
};

nlohmann::json action_to_json(const Action& a);
/// Throws SchemaError; unknown kinds throw ParseError naming the kind.
Action action_from_json(const nlohmann::json& j, const std::string& source = "<plan>");

nlohmann::json plan_to_json(const ActionPlan& plan);
ActionPlan plan_from_json(const nlohmann::json& j, const std::string& source = "<plan>");

/// Canonical plan-json bytes (sorted keys, two-space indent, trailing newline).
std::string serialize_plan(const ActionPlan& plan);
/// Throws ParseError (with line), VersionUnsupported, SchemaError.
ActionPlan deserialize_plan(std::string_view text, const std::string& source = "<plan>");

struct Diagnostic {
  std::string action_id;
  std::string code;  // unresolved-reference | ordering | invalid-params | invalid-layout | duplicate-id
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

nlohmann::json diagnostic_to_json(const Diagnostic& d);

/// Static checks. `base` is the scene the plan will run against (its terrain satisfies
/// projection ordering). Never throws.
std::vector<Diagnostic> validate_plan(const ActionPlan& plan, const Registry& registry,
                                      const SceneGraph* base = nullptr);

}  // namespace scenesmith
