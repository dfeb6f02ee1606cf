#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scenesmith/layout/relation.hpp"
#include "scenesmith/llm/client.hpp"
#include "scenesmith/plan/action_plan.hpp"
#include "scenesmith/plan/executor.hpp"
#include "scenesmith/planner/agents.hpp"
#include "scenesmith/planner/prompt.hpp"
#include "scenesmith/registry/registry.hpp"
#include "scenesmith/retrieval/embedder.hpp"
#include "scenesmith/retrieval/index.hpp"
#include "scenesmith/retrieval/retrieve.hpp"
#include "scenesmith/scene/scene_graph.hpp"

namespace scenesmith {

/// Required plugin parameters nobody supplied. Fields are "<object>.<param>".
struct ClarificationRequest {
  std::vector<std::string> fields;
  std::vector<std::string> questions;

  friend bool operator==(const ClarificationRequest&, const ClarificationRequest&) = default;
};

nlohmann::json clarification_to_json(const ClarificationRequest& c);

struct PipelineDeps {
  const Registry& registry;
  const EmbeddingIndex& index;
  const Embedder& embedder;
  LlmBackend& llm;
};

struct PipelineOptions {
  std::uint64_t seed = 0;
  PromptToggles prompt;
  RetrievalOptions retrieval;
  /// Interactive runs stop with a ClarificationRequest; others assume values and log them.
  bool interactive = false;
  /// Answers keyed by "<object>.<param>".
  std::map<std::string, nlohmann::json> answers;
};

struct PipelineResult {
  std::optional<ClarificationRequest> clarification;  // set when the run paused
  std::vector<ObjectPlan> objects;
  std::vector<SpatialRelation> relations;
  ActionPlan plan;
  SceneGraph scene;
  RunReport report;
};

/// Decompose, retrieve, parameterize, relate, place, then execute the plan on `base` (edit
/// mode, plan holds only the new actions) or on a fresh scene. Throws PipelineError.
PipelineResult run_pipeline(std::string_view query, const PipelineDeps& deps, const PipelineOptions& options,
                            const std::optional<SceneGraph>& base = std::nullopt);

/// Maps the terrain plugin's parameters onto TerrainParams. Unknown keys are ignored.
TerrainParams terrain_params_from_values(const ParamValues& values, std::uint64_t seed);

}  // namespace scenesmith
