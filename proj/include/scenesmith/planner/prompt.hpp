#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "scenesmith/registry/registry.hpp"

namespace scenesmith {

struct PromptToggles {
  bool role = true;
  bool task = true;
  bool document = true;
  bool format = true;
  bool examples = true;

  friend bool operator==(const PromptToggles&, const PromptToggles&) = default;
};

nlohmann::json prompt_toggles_to_json(const PromptToggles& t);
PromptToggles prompt_toggles_from_json(const nlohmann::json& j);

/// Agent prompt components: role (R), task (T), document (D), format (F), examples (E).
struct PromptTemplate {
  std::string role;
  std::string task;
  std::string document;
  std::string format;
  std::vector<std::string> examples;
};

/// Enabled components in R, T, D, F, E order, each under its own "### <Name>" heading.
/// Throws EmptyTemplate when every component is disabled.
std::string build_prompt(const PromptTemplate& tmpl, const PromptToggles& toggles);

PromptTemplate decomposition_template(const Registry& registry);
PromptTemplate hyperparam_template(const PluginDescriptor& descriptor);
PromptTemplate relation_template();

}  // namespace scenesmith
