#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "scenesmith/scene/scene_graph.hpp"

namespace scenesmith {

inline constexpr std::string_view kSceneSchema = "scene/1";

enum class SceneFormat { SceneJson, Obj };

SceneFormat parse_scene_format(std::string_view name);

nlohmann::json vec3_to_json(const Vec3& v);
Vec3 vec3_from_json(const nlohmann::json& j);
nlohmann::json transform_to_json(const Transform& t);
Transform transform_from_json(const nlohmann::json& j);
nlohmann::json point2_to_json(Point2 p);
Point2 point2_from_json(const nlohmann::json& j);
nlohmann::json region_to_json(const Region& r);
Region region_from_json(const nlohmann::json& j);
nlohmann::json heightfield_to_json(const Heightfield& hf);
Heightfield heightfield_from_json(const nlohmann::json& j);

nlohmann::json scene_to_json(const SceneGraph& scene);
/// Throws ParseError / SchemaError / VersionUnsupported.
SceneGraph scene_from_json(const nlohmann::json& j);

/// scene-json: sorted keys, two-space indent, trailing newline.
/// obj: terrain grid (resolution^2 vertices, two triangles per cell) followed by one
/// axis-aligned unit-box proxy per instance, scaled by the instance scale.
std::string export_scene(const SceneGraph& scene, SceneFormat format);
SceneGraph import_scene_json(std::string_view text, const std::string& source = "<memory>");

/// Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

/// Canonical dump shared by every JSON artifact (sorted keys, indent 2, trailing newline).
std::string canonical_dump(const nlohmann::json& j);

}  // namespace scenesmith
