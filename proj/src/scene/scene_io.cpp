#include "scenesmith/scene/scene_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "scenesmith/core/error.hpp"

namespace scenesmith {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(key, "missing field");
  return j.at(key);
}

double number(const json& j, const char* field) {
  if (!j.is_number()) throw SchemaError(field, "expected a number");
  return j.get<double>();
}

std::array<double, 3> triple(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 3) throw SchemaError(field, "expected [x, y, z]");
  return {number(j[0], field), number(j[1], field), number(j[2], field)};
}

}  // namespace

SceneFormat parse_scene_format(std::string_view name) {
  if (name == "scene-json" || name == "json") return SceneFormat::SceneJson;
  if (name == "obj") return SceneFormat::Obj;
  throw Error(ErrorCode::InvalidArgument, "unknown scene format '" + std::string(name) + "'");
}

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const json& j) {
  const auto t = triple(j, "vec3");
  return {t[0], t[1], t[2]};
}

json transform_to_json(const Transform& t) {
  return {{"position", vec3_to_json(t.position)},
          {"rotation", vec3_to_json(t.rotation)},
          {"scale", vec3_to_json(t.scale)}};
}

Transform transform_from_json(const json& j) {
  Transform t;
  t.position = vec3_from_json(require(j, "position"));
  t.rotation = vec3_from_json(require(j, "rotation"));
  t.scale = vec3_from_json(require(j, "scale"));
  return t;
}

json point2_to_json(Point2 p) { return json::array({p.x, p.y}); }

Point2 point2_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw SchemaError("point", "expected [x, y]");
  return {number(j[0], "point"), number(j[1], "point")};
}

json region_to_json(const Region& r) {
  switch (r.kind()) {
    case Region::Kind::Rectangle:
      return {{"kind", "rectangle"}, {"min", point2_to_json(r.rect().min)}, {"max", point2_to_json(r.rect().max)}};
    case Region::Kind::Disc:
      return {{"kind", "disc"},
              {"center", point2_to_json(r.center())},
              {"radius", r.radius()},
              {"inner_radius", r.inner_radius()}};
    case Region::Kind::Polygon: {
      json verts = json::array();
      for (const Point2& p : r.vertices()) verts.push_back(point2_to_json(p));
      return {{"kind", "polygon"}, {"vertices", verts}};
    }
  }
  return {};
}

Region region_from_json(const json& j) {
  const json& kind = require(j, "kind");
  if (!kind.is_string()) throw SchemaError("kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "rectangle") {
    return Region::rectangle(point2_from_json(require(j, "min")), point2_from_json(require(j, "max")));
  }
  if (k == "disc") {
    const double inner = j.contains("inner_radius") ? number(j.at("inner_radius"), "inner_radius") : 0.0;
    return Region::disc(point2_from_json(require(j, "center")), number(require(j, "radius"), "radius"), inner);
  }
  if (k == "polygon") {
    const json& verts = require(j, "vertices");
    if (!verts.is_array()) throw SchemaError("vertices", "expected an array");
    std::vector<Point2> pts;
    for (const json& v : verts) pts.push_back(point2_from_json(v));
    return Region::polygon(std::move(pts));
  }
  throw SchemaError("kind", "unknown region kind '" + k + "'");
}

json heightfield_to_json(const Heightfield& hf) {
  return {{"resolution", hf.resolution},
          {"size_x", hf.size_x},
          {"size_y", hf.size_y},
          {"heights", hf.heights},
          {"tags", hf.tags}};
}

Heightfield heightfield_from_json(const json& j) {
  Heightfield hf;
  const json& res = require(j, "resolution");
  if (!res.is_number_unsigned()) throw SchemaError("resolution", "expected an unsigned integer");
  hf.resolution = res.get<std::size_t>();
  hf.size_x = number(require(j, "size_x"), "size_x");
  hf.size_y = number(require(j, "size_y"), "size_y");
  const json& heights = require(j, "heights");
  if (!heights.is_array()) throw SchemaError("heights", "expected an array");
  hf.heights.reserve(heights.size());
  for (const json& h : heights) hf.heights.push_back(number(h, "heights"));
  if (hf.resolution < 2 || hf.heights.size() != hf.resolution * hf.resolution) {
    throw SchemaError("heights", "expected resolution^2 samples");
  }
  if (j.contains("tags")) hf.tags = j.at("tags").get<std::set<std::string>>();
  return hf;
}

json scene_to_json(const SceneGraph& scene) {
  json instances = json::array();
  for (const AssetInstance& inst : scene.instances()) {
    instances.push_back({{"id", inst.id},
                         {"asset_ref", inst.asset_ref},
                         {"transform", transform_to_json(inst.transform)},
                         {"tags", inst.tags},
                         {"terrain_projected", inst.terrain_projected}});
  }
  json regions = json::object();
  for (const auto& [name, region] : scene.regions()) regions[name] = region_to_json(region);
  return {{"schema", kSceneSchema},
          {"seed", scene.seed()},
          {"metadata", scene.metadata()},
          {"regions", regions},
          {"terrain", scene.terrain() ? heightfield_to_json(*scene.terrain()) : json(nullptr)},
          {"instances", instances}};
}

SceneGraph scene_from_json(const json& j) {
  const json& schema = require(j, "schema");
  if (!schema.is_string()) throw SchemaError("schema", "expected a string");
  if (schema.get<std::string>() != kSceneSchema) {
    throw Error(ErrorCode::VersionUnsupported, "unsupported scene schema '" + schema.get<std::string>() + "'");
  }
  const json& seed = require(j, "seed");
  if (!seed.is_number_unsigned()) throw SchemaError("seed", "expected an unsigned integer");
  SceneGraph scene(seed.get<std::uint64_t>());
  if (j.contains("metadata")) scene.metadata() = j.at("metadata").get<std::map<std::string, std::string>>();
  if (j.contains("regions")) {
    for (const auto& [name, r] : j.at("regions").items()) scene.set_region(name, region_from_json(r));
  }
  if (j.contains("terrain") && !j.at("terrain").is_null()) scene.set_terrain(heightfield_from_json(j.at("terrain")));
  const json& instances = require(j, "instances");
  if (!instances.is_array()) throw SchemaError("instances", "expected an array");
  for (const json& ij : instances) {
    AssetInstance inst;
    inst.id = require(ij, "id").get<std::string>();
    inst.asset_ref = require(ij, "asset_ref").get<std::string>();
    inst.transform = transform_from_json(require(ij, "transform"));
    if (ij.contains("tags")) inst.tags = ij.at("tags").get<std::set<std::string>>();
    if (ij.contains("terrain_projected")) inst.terrain_projected = ij.at("terrain_projected").get<bool>();
    scene.add_instance(std::move(inst));
  }
  return scene;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

std::string export_scene(const SceneGraph& scene, SceneFormat format) {
  if (format == SceneFormat::SceneJson) return canonical_dump(scene_to_json(scene));

  std::ostringstream out;
  out << "# scenesmith obj export\n";
  std::size_t base = 1;
  auto vertex = [&out](double x, double y, double z) {
    out << "v " << format_double(x) << ' ' << format_double(y) << ' ' << format_double(z) << '\n';
  };
  if (const auto& hf = scene.terrain()) {
    out << "o terrain\n";
    for (std::size_t j = 0; j < hf->resolution; ++j) {
      for (std::size_t i = 0; i < hf->resolution; ++i) vertex(hf->node_x(i), hf->node_y(j), hf->at(i, j));
    }
    for (std::size_t j = 0; j + 1 < hf->resolution; ++j) {
      for (std::size_t i = 0; i + 1 < hf->resolution; ++i) {
        const std::size_t a = base + j * hf->resolution + i;
        const std::size_t b = a + 1;
        const std::size_t c = a + hf->resolution + 1;
        const std::size_t d = a + hf->resolution;
        out << "f " << a << ' ' << b << ' ' << c << '\n';
        out << "f " << a << ' ' << c << ' ' << d << '\n';
      }
    }
    base += hf->resolution * hf->resolution;
  }
  static constexpr int kFaces[6][4] = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                       {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  for (const AssetInstance& inst : scene.instances()) {
    out << "o " << inst.id << '\n';
    const Aabb box = instance_footprint(inst.transform);
    for (double z : {box.min.z, box.max.z}) {
      vertex(box.min.x, box.min.y, z);
      vertex(box.max.x, box.min.y, z);
      vertex(box.max.x, box.max.y, z);
      vertex(box.min.x, box.max.y, z);
    }
    for (const auto& face : kFaces) {
      out << "f " << base + face[0] << ' ' << base + face[1] << ' ' << base + face[2] << ' '
          << base + face[3] << '\n';
    }
    base += 8;
  }
  return out.str();
}

SceneGraph import_scene_json(std::string_view text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) line += text[i] == '\n';
    throw ParseError(source, line, e.what());
  } catch (const json::exception& e) {
    throw ParseError(source, 0, e.what());
  }
  try {
    return scene_from_json(j);
  } catch (const json::exception& e) {
    throw ParseError(source, 0, e.what());
  }
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace scenesmith
