#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scenesmith/core/error.hpp"
#include "scenesmith/layout/relation.hpp"
#include "scenesmith/llm/client.hpp"
#include "scenesmith/planner/prompt.hpp"
#include "scenesmith/registry/registry.hpp"

namespace scenesmith {

/// Each agent gets this many replies (first try plus re-prompts) before giving up.
inline constexpr int kMaxAgentAttempts = 3;

struct ObjectPlan {
  std::string name;
  std::map<std::string, std::string> module_hints;  // module (plugin or capability) -> request
  std::size_t count = 1;
  std::string description;

  friend bool operator==(const ObjectPlan&, const ObjectPlan&) = default;
};

nlohmann::json object_plan_to_json(const ObjectPlan& o);

/// One agent call: request hashes and the rejection reason of every failed reply.
struct AgentLog {
  std::string stage;
  int attempts = 0;
  std::vector<std::string> request_hashes;
  std::vector<std::string> errors;

  int retries() const { return attempts > 0 ? attempts - 1 : 0; }
};

class PipelineError : public Error {
 public:
  PipelineError(std::string stage, std::vector<std::string> attempt_log, const std::string& message,
                nlohmann::json partial_plan = nullptr);

  const std::string& stage() const noexcept { return stage_; }
  const std::vector<std::string>& attempt_log() const noexcept { return attempt_log_; }
  const nlohmann::json& partial_plan() const noexcept { return partial_plan_; }

 private:
  std::string stage_;
  std::vector<std::string> attempt_log_;
  nlohmann::json partial_plan_;
};

/// The JSON document inside a reply (code fences and surrounding prose are ignored).
nlohmann::json extract_json(std::string_view reply);

struct DecomposeResult {
  std::vector<ObjectPlan> objects;
  AgentLog log;
};

/// Throws InvalidArgument for blank text, PipelineError("decompose") after the last attempt.
DecomposeResult decompose(std::string_view query, LlmBackend& llm, const Registry& registry,
                          const PromptToggles& toggles = {});

struct HyperparamResult {
  ParamAssignment assignment;  // validated and default-filled; required params may be absent
  AgentLog log;
};

/// Throws PipelineError("hyperparams") when no valid proposal arrives.
HyperparamResult generate_hyperparams(const PluginDescriptor& descriptor, const ObjectPlan& object, LlmBackend& llm,
                                      const PromptToggles& toggles = {});

struct RelationResult {
  std::vector<SpatialRelation> relations;
  AgentLog log;
};

/// Throws InvalidArgument for an empty object list, PipelineError("relations") after the last attempt.
RelationResult extract_relations(const std::vector<ObjectPlan>& objects, LlmBackend& llm,
                                 const PromptToggles& toggles = {});

}  // namespace scenesmith
