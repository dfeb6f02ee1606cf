#include "scenesmith/layout/layout_spec.hpp"

#include "scenesmith/core/error.hpp"
#include "scenesmith/scene/scene_io.hpp"

namespace scenesmith {

using nlohmann::json;

namespace {

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(key, "missing layout field");
  return j.at(key);
}

double num(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number()) throw SchemaError(key, "expected a number");
  return v.get<double>();
}

std::uint64_t unsigned_num(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number_unsigned()) throw SchemaError(key, "expected an unsigned integer");
  return v.get<std::uint64_t>();
}

bool boolean(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_boolean()) throw SchemaError(key, "expected a boolean");
  return v.get<bool>();
}

json path_to_json(const std::vector<Point2>& path) {
  json out = json::array();
  for (const Point2& p : path) out.push_back(point2_to_json(p));
  return out;
}

std::vector<Point2> path_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("path", "expected a list of [x, y] points");
  std::vector<Point2> out;
  for (const json& p : j) out.push_back(point2_from_json(p));
  return out;
}

}  // namespace

std::string_view layout_kind_name(LayoutKind kind) {
  switch (kind) {
    case LayoutKind::Scatter: return "scatter";
    case LayoutKind::Grid: return "grid";
    case LayoutKind::Linear: return "linear";
    case LayoutKind::Nested: return "nested";
    case LayoutKind::AreaFill: return "area_fill";
  }
  return "unknown";
}

json layout_spec_to_json(const LayoutSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ScatterSpec>) {
          json exclude = json::array();
          for (const Region& r : s.exclude) exclude.push_back(region_to_json(r));
          return {{"kind", "scatter"},
                  {"region", region_to_json(s.region)},
                  {"count", s.count},
                  {"min_separation", s.min_separation},
                  {"seed", s.seed},
                  {"exclude", exclude}};
        } else if constexpr (std::is_same_v<T, GridSpec>) {
          return {{"kind", "grid"},       {"origin", point2_to_json(s.origin)},
                  {"rows", s.rows},       {"cols", s.cols},
                  {"spacing", s.spacing}, {"jitter", s.jitter},
                  {"seed", s.seed}};
        } else if constexpr (std::is_same_v<T, LinearSpec>) {
          json circle = nullptr;
          if (s.circle) {
            circle = {{"center", point2_to_json(s.circle->center)},
                      {"radius", s.circle->radius},
                      {"count", s.circle->count}};
          }
          return {{"kind", "linear"},
                  {"path", path_to_json(s.path)},
                  {"circle", circle},
                  {"spacing", s.spacing},
                  {"lateral_offset", s.lateral_offset},
                  {"align_to_tangent", s.align_to_tangent}};
        } else if constexpr (std::is_same_v<T, NestedSpec>) {
          json children = json::array();
          for (const LayoutSpec& c : s.children) children.push_back(layout_spec_to_json(c));
          return {{"kind", "nested"}, {"parent", region_to_json(s.parent)}, {"children", children}};
        } else {
          return {{"kind", "area_fill"},
                  {"region", region_to_json(s.region)},
                  {"footprint", json::array({s.footprint_x, s.footprint_y})},
                  {"gap", s.gap},
                  {"orientation", s.orientation}};
        }
      },
      spec.params);
}

LayoutSpec layout_spec_from_json(const json& j) {
  const json& kind_j = need(j, "kind");
  if (!kind_j.is_string()) throw SchemaError("kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();
  if (kind == "scatter") {
    ScatterSpec s{region_from_json(need(j, "region")), unsigned_num(j, "count"), num(j, "min_separation"),
                  unsigned_num(j, "seed"), {}};
    if (j.contains("exclude")) {
      for (const json& r : j.at("exclude")) s.exclude.push_back(region_from_json(r));
    }
    return {s};
  }
  if (kind == "grid") {
    return {GridSpec{point2_from_json(need(j, "origin")), unsigned_num(j, "rows"), unsigned_num(j, "cols"),
                     num(j, "spacing"), num(j, "jitter"), unsigned_num(j, "seed")}};
  }
  if (kind == "linear") {
    LinearSpec s;
    s.path = j.contains("path") ? path_from_json(j.at("path")) : std::vector<Point2>{};
    if (j.contains("circle") && !j.at("circle").is_null()) {
      const json& c = j.at("circle");
      s.circle = CirclePath{point2_from_json(need(c, "center")), num(c, "radius"), unsigned_num(c, "count")};
    }
    s.spacing = num(j, "spacing");
    s.lateral_offset = num(j, "lateral_offset");
    s.align_to_tangent = boolean(j, "align_to_tangent");
    return {s};
  }
  if (kind == "nested") {
    NestedSpec s{region_from_json(need(j, "parent")), {}};
    const json& children = need(j, "children");
    if (!children.is_array()) throw SchemaError("children", "expected an array");
    for (const json& c : children) s.children.push_back(layout_spec_from_json(c));
    return {s};
  }
  if (kind == "area_fill") {
    const json& fp = need(j, "footprint");
    if (!fp.is_array() || fp.size() != 2 || !fp[0].is_number() || !fp[1].is_number()) {
      throw SchemaError("footprint", "expected [x, y] extents");
    }
    return {AreaFillSpec{region_from_json(need(j, "region")), fp[0].get<double>(), fp[1].get<double>(), num(j, "gap"),
                         num(j, "orientation")}};
  }
  throw SchemaError("kind", "unknown layout kind '" + kind + "'");
}

}  // namespace scenesmith
