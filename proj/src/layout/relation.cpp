#include "scenesmith/layout/relation.hpp"

#include <cmath>
#include <numbers>

#include "scenesmith/core/error.hpp"

namespace scenesmith {

using nlohmann::json;

namespace {

ParamSpec number(std::string name, std::string description, ParamKind kind, double min, double max, json def,
                 std::optional<std::string> unit = std::nullopt) {
  ParamSpec p;
  p.name = std::move(name);
  p.description = std::move(description);
  p.kind = kind;
  p.min = min;
  p.max = max;
  p.default_value = std::move(def);
  p.unit = std::move(unit);
  return p;
}

ParamSpec count_param(int def) {
  return number("count", "Number of instances to place", ParamKind::Int, 0, 100000, def);
}

ParamSpec separation_param(double def) {
  return number("min_separation", "Minimum distance between placed instances", ParamKind::Float, 0.01, 1000, def,
                "m");
}

PluginDescriptor make_descriptor(RelationKind kind) {
  PluginDescriptor d;
  d.name = "relation:" + std::string(relation_kind_name(kind));
  d.capability = "assets-placement";
  switch (kind) {
    case RelationKind::Near:
      d.description = "Scatter the subject in a ring around the anchor";
      d.params = {count_param(1), separation_param(1.0),
                  number("min_distance", "Inner ring radius", ParamKind::Float, 0, 10000, 0.0, "m"),
                  number("max_distance", "Outer ring radius", ParamKind::Float, 0.01, 10000, 10.0, "m")};
      break;
    case RelationKind::On:
      d.description = "Scatter the subject over the anchor surface, resting on the terrain";
      d.params = {count_param(1), separation_param(2.0)};
      break;
    case RelationKind::Inside: {
      d.description = "Place the subject within the anchor region";
      ParamSpec layout;
      layout.name = "layout";
      layout.description = "Generator used inside the region";
      layout.kind = ParamKind::Enum;
      layout.options = {"scatter", "area_fill"};
      layout.default_value = "scatter";
      d.params = {count_param(1), separation_param(2.0), layout,
                  number("footprint_x", "Footprint width for area_fill", ParamKind::Float, 0.1, 1000, 10.0, "m"),
                  number("footprint_y", "Footprint depth for area_fill", ParamKind::Float, 0.1, 1000, 10.0, "m"),
                  number("gap", "Gap between area_fill footprints", ParamKind::Float, 0, 1000, 2.0, "m")};
      break;
    }
    case RelationKind::Along: {
      d.description = "Line the subject up along the anchor path";
      ParamSpec align;
      align.name = "align_to_tangent";
      align.description = "Face along the path";
      align.kind = ParamKind::Bool;
      align.default_value = true;
      d.params = {number("spacing", "Arc-length spacing", ParamKind::Float, 0.01, 10000, 5.0, "m"),
                  number("lateral_offset", "Offset to the left of the path", ParamKind::Float, -1000, 1000, 0.0, "m"),
                  align};
      break;
    }
    case RelationKind::Avoid:
      d.description = "Scatter the subject over the domain while keeping clear of the anchor";
      d.params = {count_param(1), separation_param(2.0),
                  number("clearance", "Radius kept free around anchor instances", ParamKind::Float, 0, 10000, 5.0,
                         "m")};
      break;
    case RelationKind::Surround:
      d.description = "Ring the anchor with evenly spaced copies of the subject";
      d.params = {count_param(8),
                  number("radius", "Circle radius", ParamKind::Float, 0.01, 10000, 10.0, "m")};
      break;
  }
  return d;
}

struct Anchor {
  enum class Kind { Terrain, Region, Objects };
  Kind kind;
  Region region;               // terrain extent or named region
  std::vector<Point2> points;  // instance positions, in scene order
  Point2 center;
};

Region terrain_extent(const Heightfield& hf) { return Region::rectangle({0.0, 0.0}, {hf.size_x, hf.size_y}); }

Anchor find_anchor(const std::string& name, const SceneGraph& scene) {
  if (name == "terrain") {
    if (!scene.terrain()) throw Error(ErrorCode::UnknownAnchor, "anchor 'terrain' but the scene has no terrain");
    Anchor a{Anchor::Kind::Terrain, terrain_extent(*scene.terrain()), {}, {}};
    a.center = a.region.center();
    return a;
  }
  if (auto it = scene.regions().find(name); it != scene.regions().end()) {
    return {Anchor::Kind::Region, it->second, {}, it->second.center()};
  }
  const std::string tag = object_tag(name);
  Anchor a{Anchor::Kind::Objects, {}, {}, {}};
  for (const AssetInstance& inst : scene.instances()) {
    if (inst.id == name || inst.tags.count(tag) != 0) {
      a.points.push_back({inst.transform.position.x, inst.transform.position.y});
    }
  }
  if (a.points.empty()) throw Error(ErrorCode::UnknownAnchor, "anchor '" + name + "' not found in the scene");
  for (const Point2& p : a.points) {
    a.center.x += p.x;
    a.center.y += p.y;
  }
  a.center.x /= static_cast<double>(a.points.size());
  a.center.y /= static_cast<double>(a.points.size());
  return a;
}

ParamValues filled_params(const SpatialRelation& rel) {
  return fill_defaults(relation_descriptor(rel.kind), rel.params).values;
}

double f(const ParamValues& v, const char* key) { return v.at(key).get<double>(); }
std::size_t n(const ParamValues& v, const char* key) { return v.at(key).get<std::size_t>(); }

[[noreturn]] void unsupported(const SpatialRelation& rel, const char* what) {
  throw Error(ErrorCode::UnsupportedRelation,
              std::string(relation_kind_name(rel.kind)) + " cannot use " + what + " anchor '" + rel.anchor + "'");
}

std::vector<Point2> closed_boundary(const Region& r) {
  std::vector<Point2> path;
  if (r.kind() == Region::Kind::Rectangle) {
    const Rect2& b = r.rect();
    path = {b.min, {b.max.x, b.min.y}, b.max, {b.min.x, b.max.y}};
  } else {
    path = r.vertices();
  }
  path.push_back(path.front());
  return path;
}

}  // namespace

std::string_view relation_kind_name(RelationKind kind) {
  switch (kind) {
    case RelationKind::Near: return "near";
    case RelationKind::On: return "on";
    case RelationKind::Inside: return "inside";
    case RelationKind::Along: return "along";
    case RelationKind::Avoid: return "avoid";
    case RelationKind::Surround: return "surround";
  }
  return "unknown";
}

RelationKind parse_relation_kind(std::string_view name) {
  for (RelationKind k : {RelationKind::Near, RelationKind::On, RelationKind::Inside, RelationKind::Along,
                         RelationKind::Avoid, RelationKind::Surround}) {
    if (relation_kind_name(k) == name) return k;
  }
  throw Error(ErrorCode::UnsupportedRelation, "unknown relation kind '" + std::string(name) + "'");
}

std::string object_tag(std::string_view object_name) { return "object:" + std::string(object_name); }

json relation_to_json(const SpatialRelation& r) {
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  return {{"subject", r.subject}, {"anchor", r.anchor}, {"kind", relation_kind_name(r.kind)}, {"params", params}};
}

SpatialRelation relation_from_json(const json& j) {
  SpatialRelation r;
  for (const char* key : {"subject", "anchor", "kind"}) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_string()) {
      throw SchemaError(key, "relation needs a string field");
    }
  }
  r.subject = j.at("subject").get<std::string>();
  r.anchor = j.at("anchor").get<std::string>();
  r.kind = parse_relation_kind(j.at("kind").get<std::string>());
  if (j.contains("params")) {
    if (!j.at("params").is_object()) throw SchemaError("params", "expected an object");
    for (const auto& [k, v] : j.at("params").items()) r.params[k] = v;
  }
  return r;
}

const PluginDescriptor& relation_descriptor(RelationKind kind) {
  static const std::vector<PluginDescriptor> table = [] {
    std::vector<PluginDescriptor> t;
    for (int k = 0; k <= static_cast<int>(RelationKind::Surround); ++k) {
      t.push_back(make_descriptor(static_cast<RelationKind>(k)));
    }
    return t;
  }();
  return table[static_cast<std::size_t>(kind)];
}

std::vector<Region> relation_exclusions(const SpatialRelation& rel, const SceneGraph& scene) {
  const Anchor a = find_anchor(rel.anchor, scene);
  if (a.kind != Anchor::Kind::Objects) return {a.region};
  const double clearance = f(filled_params(rel), "clearance");
  std::vector<Region> out;
  if (clearance <= 0.0) return out;
  for (const Point2& p : a.points) out.push_back(Region::disc(p, clearance));
  return out;
}

ResolvedRelation resolve_relation(const SpatialRelation& rel, const SceneGraph& scene, const RelationContext& ctx) {
  const ParamValues v = filled_params(rel);
  const Anchor a = find_anchor(rel.anchor, scene);
  const bool has_terrain = scene.terrain().has_value();

  auto scatter_in = [&](Region region) {
    ScatterSpec s;
    s.region = std::move(region);
    s.count = n(v, "count");
    s.min_separation = f(v, "min_separation");
    s.seed = ctx.seed;
    s.exclude = ctx.exclusions;
    return ResolvedRelation{{s}, has_terrain};
  };

  switch (rel.kind) {
    case RelationKind::Near: {
      const double lo = f(v, "min_distance"), hi = f(v, "max_distance");
      if (!(hi > lo)) throw Error(ErrorCode::InvalidParams, "near: max_distance must exceed min_distance");
      return scatter_in(Region::disc(a.center, hi, lo));
    }
    case RelationKind::On:
      if (a.kind == Anchor::Kind::Objects) unsupported(rel, "an object");
      return scatter_in(a.region);
    case RelationKind::Inside: {
      if (a.kind == Anchor::Kind::Objects) unsupported(rel, "an object");
      if (v.at("layout") == "area_fill") {
        AreaFillSpec s{a.region, f(v, "footprint_x"), f(v, "footprint_y"), f(v, "gap"), 0.0};
        return {{s}, has_terrain};
      }
      return scatter_in(a.region);
    }
    case RelationKind::Along: {
      LinearSpec s;
      s.spacing = f(v, "spacing");
      s.lateral_offset = f(v, "lateral_offset");
      s.align_to_tangent = v.at("align_to_tangent").get<bool>();
      switch (a.kind) {
        case Anchor::Kind::Terrain:
          unsupported(rel, "the terrain");
        case Anchor::Kind::Objects:
          s.path = a.points;
          break;
        case Anchor::Kind::Region:
          if (a.region.kind() == Region::Kind::Disc) {
            const double r = a.region.radius();
            const auto count = static_cast<std::size_t>(std::floor(2.0 * std::numbers::pi * r / s.spacing));
            s.circle = CirclePath{a.region.center(), r, std::max<std::size_t>(count, 1)};
          } else {
            s.path = closed_boundary(a.region);
          }
          break;
      }
      return {{s}, has_terrain};
    }
    case RelationKind::Avoid: {
      std::optional<Region> domain = ctx.domain;
      if (!domain && has_terrain) domain = terrain_extent(*scene.terrain());
      if (!domain) throw Error(ErrorCode::UnknownAnchor, "avoid needs a terrain or an explicit domain");
      ResolvedRelation out = scatter_in(*domain);
      auto& s = std::get<ScatterSpec>(out.spec.params);
      for (Region& r : relation_exclusions(rel, scene)) s.exclude.push_back(std::move(r));
      return out;
    }
    case RelationKind::Surround: {
      LinearSpec s;
      s.circle = CirclePath{a.center, f(v, "radius"), n(v, "count")};
      s.align_to_tangent = true;
      return {{s}, has_terrain};
    }
  }
  throw Error(ErrorCode::UnsupportedRelation, "unhandled relation kind");
}

}  // namespace scenesmith
