#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenesmith/plan/action_plan.hpp"
#include "scenesmith/registry/registry.hpp"
#include "scenesmith/scene/scene_graph.hpp"

namespace scenesmith {

struct ActionOutcome {
  std::string action_id;
  std::string kind;
  bool executed = false;
  /// "plan" for actions the planner proposed but could not build, else "execute".
  std::string stage = "execute";
  std::string error_code;
  std::string message;
  std::size_t instances_added = 0;
  std::vector<std::string> notes;

  friend bool operator==(const ActionOutcome&, const ActionOutcome&) = default;
};

/// Deterministic record of one pipeline or plan run; contains no timings.
struct RunReport {
  std::uint64_t seed = 0;
  std::string query;
  std::vector<ActionOutcome> outcomes;
  std::vector<Diagnostic> diagnostics;
  std::vector<std::string> log;
  std::vector<std::string> assumptions;
  std::map<std::string, int> retries;  // stage -> re-prompts
  bool end_flag = false;

  std::size_t proposed_count() const { return outcomes.size(); }
  std::size_t executed_count() const;
  std::size_t failed_count() const { return proposed_count() - executed_count(); }

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

nlohmann::json run_report_to_json(const RunReport& r);
RunReport run_report_from_json(const nlohmann::json& j);

struct ExecutionResult {
  SceneGraph scene;
  RunReport report;
};

/// Applies actions in order on a copy of `base` (a fresh scene seeded with plan.seed when
/// absent). Failing actions are recorded and skipped; the scene keeps every successful one.
ExecutionResult execute_plan(const ActionPlan& plan, const Registry& registry,
                             const std::optional<SceneGraph>& base = std::nullopt);

/// Instance id prefix for an object name: lowercase alphanumerics, everything else '_'.
std::string instance_prefix(const std::string& object_name);

}  // namespace scenesmith
