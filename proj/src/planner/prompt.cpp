#include "scenesmith/planner/prompt.hpp"

#include "scenesmith/core/error.hpp"
#include "scenesmith/layout/relation.hpp"

namespace scenesmith {

using nlohmann::json;

json prompt_toggles_to_json(const PromptToggles& t) {
  return {{"role", t.role}, {"task", t.task}, {"document", t.document}, {"format", t.format}, {"examples", t.examples}};
}

PromptToggles prompt_toggles_from_json(const json& j) {
  PromptToggles t;
  if (!j.is_object()) throw SchemaError("prompt", "expected an object of component toggles");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_boolean()) throw SchemaError(key, "prompt toggle must be a boolean");
    const bool on = value.get<bool>();
    if (key == "role") t.role = on;
    else if (key == "task") t.task = on;
    else if (key == "document") t.document = on;
    else if (key == "format") t.format = on;
    else if (key == "examples") t.examples = on;
    else throw SchemaError(key, "unknown prompt component");
  }
  return t;
}

std::string build_prompt(const PromptTemplate& tmpl, const PromptToggles& toggles) {
  std::string out;
  auto section = [&out](const char* heading, const std::string& body) {
    if (!out.empty()) out += "\n";
    out += "### ";
    out += heading;
    out += "\n";
    out += body;
    if (out.back() != '\n') out += "\n";
  };
  if (toggles.role) section("Role", tmpl.role);
  if (toggles.task) section("Task", tmpl.task);
  if (toggles.document) section("Document", tmpl.document);
  if (toggles.format) section("Format", tmpl.format);
  if (toggles.examples) {
    std::string body;
    for (std::size_t i = 0; i < tmpl.examples.size(); ++i) {
      body += "Example " + std::to_string(i + 1) + ":\n" + tmpl.examples[i];
      if (body.back() != '\n') body += "\n";
    }
    section("Examples", body);
  }
  if (out.empty()) throw Error(ErrorCode::EmptyTemplate, "every prompt component is disabled");
  return out;
}

PromptTemplate decomposition_template(const Registry& registry) {
  PromptTemplate t;
  t.role = "You are the scene planner of a procedural 3D scene generator.";
  t.task =
      "Break the user's scene description into a list of objects. Include the terrain as an object when the scene "
      "is outdoors. For each object give a short name, how many instances it needs, a description, and the "
      "modules that should build it. A module key is a plugin name from the document when a plugin fits, "
      "otherwise a capability name; the value says what that module should produce.";
  json plugins = json::array();
  for (const auto& [name, d] : registry.descriptors()) {
    plugins.push_back({{"name", name}, {"capability", d.capability}, {"description", d.description}});
  }
  t.document = "Available plugins:\n" + plugins.dump(2) + "\nCapabilities: ";
  const auto& caps = capability_vocabulary();
  for (std::size_t i = 0; i < caps.size(); ++i) t.document += (i ? ", " : "") + caps[i];
  t.document += "\n";
  t.format =
      "Reply with JSON only:\n"
      R"({"objects": [{"name": string, "count": integer >= 1, "description": string, "modules": {string: string}}]})";
  t.examples = {
      "Input: a small village with a well\n"
      R"(Output: {"objects": [{"name": "terrain", "count": 1, "description": "gentle grassy plain", )"
      R"("modules": {"terrain": "flat grassland"}}, {"name": "house", "count": 6, "description": "small cottages", )"
      R"("modules": {"building": "small stone cottage"}}, {"name": "well", "count": 1, "description": "stone well", )"
      R"("modules": {"assets-placement": "old stone well"}}]})"};
  return t;
}

PromptTemplate hyperparam_template(const PluginDescriptor& descriptor) {
  PromptTemplate t;
  t.role = "You are the parameter engineer for the '" + descriptor.name + "' plugin.";
  t.task =
      "Convert the object description into plugin parameters. Only use parameters listed in the document, keep "
      "numbers inside their ranges and enum values inside their options. Omit parameters the description does "
      "not determine.";
  t.document = descriptor_to_json(descriptor).dump(2);
  t.format = R"(Reply with JSON only: {"params": {parameter name: value}})";
  t.examples = {"Input: tall pine trees in winter\n"
                R"(Output: {"params": {"height": 20, "season": "winter", "species": "pine"}})"};
  return t;
}

PromptTemplate relation_template() {
  PromptTemplate t;
  t.role = "You are the layout planner of a procedural 3D scene generator.";
  t.task =
      "Describe where each object goes relative to the others. Each relation has a subject object, an anchor "
      "(another object, a named region, or \"terrain\") and a kind. Objects without a relation are placed at the "
      "scene center.";
  json kinds = json::object();
  for (RelationKind k : {RelationKind::Near, RelationKind::On, RelationKind::Inside, RelationKind::Along,
                         RelationKind::Avoid, RelationKind::Surround}) {
    const PluginDescriptor& d = relation_descriptor(k);
    json params = json::array();
    for (const ParamSpec& p : d.params) params.push_back(param_spec_to_json(p));
    kinds[std::string(relation_kind_name(k))] = {{"description", d.description}, {"params", params}};
  }
  t.document = kinds.dump(2);
  t.format =
      "Reply with JSON only:\n"
      R"({"relations": [{"subject": string, "anchor": string, "kind": string, "params": object}]})";
  t.examples = {"Input: objects terrain, house (6), well (1)\n"
                R"(Output: {"relations": [{"subject": "house", "anchor": "well", "kind": "surround", )"
                R"("params": {"radius": 15, "count": 6}}]})"};
  return t;
}

}  // namespace scenesmith
