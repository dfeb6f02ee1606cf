#include "scenesmith/plan/action_plan.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "scenesmith/core/error.hpp"
#include "scenesmith/layout/generators.hpp"
#include "scenesmith/scene/scene_io.hpp"

namespace scenesmith {

using nlohmann::json;

namespace {

std::string str(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) throw SchemaError(key, "expected a string");
  return j.at(key).get<std::string>();
}

std::size_t count_of(const json& j) {
  if (!j.contains("count")) return 1;
  if (!j.at("count").is_number_unsigned()) throw SchemaError("count", "expected an unsigned integer");
  return j.at("count").get<std::size_t>();
}

std::optional<std::string> opt_str(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return str(j, key);
}

std::optional<Transform> opt_transform(const json& j) {
  if (!j.contains("transform") || j.at("transform").is_null()) return std::nullopt;
  return transform_from_json(j.at("transform"));
}

json opt_to_json(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }
json opt_to_json(const std::optional<Transform>& v) { return v ? transform_to_json(*v) : json(nullptr); }

json params_to_json(const ParamValues& values) {
  json out = json::object();
  for (const auto& [k, v] : values) out[k] = v;
  return out;
}

ParamValues params_from_json(const json& j) {
  ParamValues out;
  if (!j.contains("params")) return out;
  if (!j.at("params").is_object()) throw SchemaError("params", "expected an object");
  for (const auto& [k, v] : j.at("params").items()) out[k] = v;
  return out;
}

std::size_t line_of_byte(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

std::string_view action_kind_name(const Action& a) {
  switch (a.index()) {
    case 0: return "GenerateTerrain";
    case 1: return "InvokeApi";
    case 2: return "ImportAsset";
    default: return "PlaceLayout";
  }
}

const std::string& action_id(const Action& a) {
  return std::visit([](const auto& x) -> const std::string& { return x.id; }, a);
}

const Action* ActionPlan::find(std::string_view id) const {
  for (const Action& a : actions) {
    if (action_id(a) == id) return &a;
  }
  return nullptr;
}

json action_to_json(const Action& a) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, GenerateTerrainAction>) {
          return {{"kind", "GenerateTerrain"}, {"id", x.id}, {"params", terrain_params_to_json(x.params)}};
        } else if constexpr (std::is_same_v<T, InvokeApiAction>) {
          return {{"kind", "InvokeApi"},
                  {"id", x.id},
                  {"object", x.object},
                  {"plugin", x.plugin},
                  {"params", params_to_json(x.params)},
                  {"count", x.count},
                  {"layout_ref", opt_to_json(x.layout_ref)},
                  {"transform", opt_to_json(x.transform)},
                  {"region", x.region ? region_to_json(*x.region) : json(nullptr)}};
        } else if constexpr (std::is_same_v<T, ImportAssetAction>) {
          return {{"kind", "ImportAsset"},   {"id", x.id},
                  {"object", x.object},      {"asset", x.asset},
                  {"count", x.count},        {"layout_ref", opt_to_json(x.layout_ref)},
                  {"transform", opt_to_json(x.transform)}};
        } else {
          return {{"kind", "PlaceLayout"},
                  {"id", x.id},
                  {"object_ref", x.object_ref},
                  {"layout", layout_spec_to_json(x.layout)},
                  {"project_to_terrain", x.project_to_terrain}};
        }
      },
      a);
}

Action action_from_json(const json& j, const std::string& source) {
  if (!j.is_object()) throw SchemaError("actions", "each action must be an object");
  const std::string kind = str(j, "kind");
  const std::string id = str(j, "id");
  if (kind == "GenerateTerrain") {
    if (!j.contains("params")) throw SchemaError("params", "GenerateTerrain needs params");
    return GenerateTerrainAction{id, terrain_params_from_json(j.at("params"))};
  }
  if (kind == "InvokeApi") {
    InvokeApiAction a;
    a.id = id;
    a.object = str(j, "object");
    a.plugin = str(j, "plugin");
    a.params = params_from_json(j);
    a.count = count_of(j);
    a.layout_ref = opt_str(j, "layout_ref");
    a.transform = opt_transform(j);
    if (j.contains("region") && !j.at("region").is_null()) a.region = region_from_json(j.at("region"));
    return a;
  }
  if (kind == "ImportAsset") {
    return ImportAssetAction{id, str(j, "object"), str(j, "asset"), count_of(j), opt_str(j, "layout_ref"),
                             opt_transform(j)};
  }
  if (kind == "PlaceLayout") {
    if (!j.contains("layout")) throw SchemaError("layout", "PlaceLayout needs a layout");
    const json& flag = j.contains("project_to_terrain") ? j.at("project_to_terrain") : json(false);
    if (!flag.is_boolean()) throw SchemaError("project_to_terrain", "expected a boolean");
    return PlaceLayoutAction{id, str(j, "object_ref"), layout_spec_from_json(j.at("layout")), flag.get<bool>()};
  }
  throw ParseError(source, 0, "unknown action kind '" + kind + "' (action '" + id + "')");
}

json plan_to_json(const ActionPlan& plan) {
  json actions = json::array();
  for (const Action& a : plan.actions) actions.push_back(action_to_json(a));
  return {{"schema", kPlanSchema}, {"seed", plan.seed}, {"actions", actions}};
}

ActionPlan plan_from_json(const json& j, const std::string& source) {
  if (!j.is_object()) throw SchemaError("schema", "plan must be a JSON object");
  const std::string schema = str(j, "schema");
  if (schema != kPlanSchema) {
    throw Error(ErrorCode::VersionUnsupported,
                "plan schema '" + schema + "' is not supported (expected '" + std::string(kPlanSchema) + "')");
  }
  ActionPlan plan;
  if (!j.contains("seed") || !j.at("seed").is_number_unsigned()) throw SchemaError("seed", "expected an unsigned integer");
  plan.seed = j.at("seed").get<std::uint64_t>();
  if (!j.contains("actions") || !j.at("actions").is_array()) throw SchemaError("actions", "expected an array");
  for (const json& a : j.at("actions")) plan.actions.push_back(action_from_json(a, source));
  return plan;
}

std::string serialize_plan(const ActionPlan& plan) { return canonical_dump(plan_to_json(plan)); }

ActionPlan deserialize_plan(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, line_of_byte(text, e.byte), e.what());
  }
  return plan_from_json(doc, source);
}

json diagnostic_to_json(const Diagnostic& d) {
  return {{"action_id", d.action_id}, {"code", d.code}, {"message", d.message}};
}

std::vector<Diagnostic> validate_plan(const ActionPlan& plan, const Registry& registry, const SceneGraph* base) {
  std::vector<Diagnostic> out;
  auto diag = [&](const std::string& id, const char* code, std::string msg) {
    out.push_back({id, code, std::move(msg)});
  };

  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < plan.actions.size(); ++i) {
    const std::string& id = action_id(plan.actions[i]);
    if (!position.emplace(id, i).second) diag(id, "duplicate-id", "action id '" + id + "' is used more than once");
  }

  auto check_layout_ref = [&](const std::string& id, const std::optional<std::string>& ref) {
    if (!ref) return;
    const Action* target = plan.find(*ref);
    const auto* place = target ? std::get_if<PlaceLayoutAction>(target) : nullptr;
    if (place == nullptr) {
      diag(id, "unresolved-reference", "layout_ref '" + *ref + "' is not a PlaceLayout action in this plan");
    } else if (place->object_ref != id) {
      diag(id, "unresolved-reference", "layout '" + *ref + "' places '" + place->object_ref + "', not '" + id + "'");
    }
  };

  bool terrain_ready = base != nullptr && base->terrain().has_value();
  std::set<std::string> declared;
  for (const Action& action : plan.actions) {
    const std::string& id = action_id(action);
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, GenerateTerrainAction>) {
            try {
              validate_terrain_params(a.params);
            } catch (const Error& e) {
              diag(id, "invalid-params", e.what());
            }
            terrain_ready = true;
          } else if constexpr (std::is_same_v<T, InvokeApiAction>) {
            const PluginDescriptor* d = registry.descriptor(a.plugin);
            if (d == nullptr) {
              diag(id, "unresolved-reference", "plugin '" + a.plugin + "' is not registered");
            } else {
              for (const Violation& v : validate_params(*d, a.params).violations) {
                diag(id, "invalid-params", v.param + ": " + v.reason);
              }
              for (const std::string& m : missing_required(*d, a.params)) {
                diag(id, "invalid-params", m + ": required parameter missing");
              }
            }
            if (a.region) {
              try {
                a.region->validate();
              } catch (const Error& e) {
                diag(id, "invalid-layout", e.what());
              }
            }
            check_layout_ref(id, a.layout_ref);
            declared.insert(id);
          } else if constexpr (std::is_same_v<T, ImportAssetAction>) {
            if (registry.asset(a.asset) == nullptr) {
              diag(id, "unresolved-reference", "asset '" + a.asset + "' is not in the catalog");
            }
            check_layout_ref(id, a.layout_ref);
            declared.insert(id);
          } else {
            if (declared.count(a.object_ref) == 0) {
              const bool later = position.count(a.object_ref) != 0;
              diag(id, later ? "ordering" : "unresolved-reference",
                   later ? "object '" + a.object_ref + "' is declared after its layout"
                         : "object_ref '" + a.object_ref + "' does not name an InvokeApi or ImportAsset action");
            }
            if (a.project_to_terrain && !terrain_ready) {
              diag(id, "ordering", "terrain projection before any GenerateTerrain");
            }
            try {
              validate_layout_spec(a.layout);
            } catch (const Error& e) {
              diag(id, "invalid-layout", e.what());
            }
          }
        },
        action);
  }
  return out;
}

}  // namespace scenesmith
