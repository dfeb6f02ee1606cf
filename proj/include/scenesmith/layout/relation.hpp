#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scenesmith/layout/layout_spec.hpp"
#include "scenesmith/registry/registry.hpp"
#include "scenesmith/scene/scene_graph.hpp"

namespace scenesmith {

enum class RelationKind { Near, On, Inside, Along, Avoid, Surround };

std::string_view relation_kind_name(RelationKind kind);
/// Throws UnsupportedRelation.
RelationKind parse_relation_kind(std::string_view name);

/// Tag carried by every instance generated for a planned object.
std::string object_tag(std::string_view object_name);

/// `anchor` names a planned object (matched through object_tag), a scene region, an
/// instance id, or "terrain".
struct SpatialRelation {
  std::string subject;
  std::string anchor;
  RelationKind kind = RelationKind::Near;
  ParamValues params;

  friend bool operator==(const SpatialRelation&, const SpatialRelation&) = default;
};

nlohmann::json relation_to_json(const SpatialRelation& r);
SpatialRelation relation_from_json(const nlohmann::json& j);

/// Built-in parameter descriptor for a relation kind, named "relation:<kind>".
const PluginDescriptor& relation_descriptor(RelationKind kind);

struct RelationContext {
  std::uint64_t seed = 0;
  /// Extra exclusion masks (from avoid relations on the same subject).
  std::vector<Region> exclusions;
  /// Domain for avoid relations; defaults to the terrain extent.
  std::optional<Region> domain;
};

struct ResolvedRelation {
  LayoutSpec spec;
  bool project_to_terrain = false;
};

/// Throws UnknownAnchor, UnsupportedRelation (kind/anchor combination), InvalidParams.
ResolvedRelation resolve_relation(const SpatialRelation& rel, const SceneGraph& scene, const RelationContext& ctx);

/// Exclusion masks an avoid relation contributes: the anchor region, or a disc of radius
/// `clearance` around each anchor instance.
std::vector<Region> relation_exclusions(const SpatialRelation& rel, const SceneGraph& scene);

}  // namespace scenesmith
