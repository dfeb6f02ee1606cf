#pragma once

#include <filesystem>
#include <memory>

#include <json.hpp>

#include "scenesmith/llm/client.hpp"
#include "scenesmith/planner/pipeline.hpp"
#include "scenesmith/retrieval/embedder.hpp"
#include "scenesmith/retrieval/index.hpp"

namespace scenesmith {

/// Pipeline config file. Relative paths resolve against the file's directory.
///
///   {"registry": "registry", "seed": 42, "interactive": false,
///    "llm": {"kind": "replay", "cassette": "transcripts", "model": "mock"},
///    "embedder": {"kind": "mock", "dim": 768},
///    "prompt": {"role": true, "task": true, "document": true, "format": true, "examples": true},
///    "api_threshold": 0.5}
struct PipelineConfig {
  std::filesystem::path registry_dir = "registry";
  BackendConfig llm;
  EmbedderConfig embedder;
  std::uint64_t seed = 0;
  PromptToggles prompt;
  bool interactive = false;
  double api_threshold = 0.5;

  PipelineOptions options() const;
};

PipelineConfig pipeline_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
nlohmann::json pipeline_config_to_json(const PipelineConfig& c);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// Everything a pipeline run needs, loaded once and shared.
struct Engine {
  Registry registry;
  std::unique_ptr<Embedder> embedder;
  EmbeddingIndex index;
  std::unique_ptr<LlmBackend> llm;

  PipelineDeps deps() { return {registry, index, *embedder, *llm}; }
};

/// Loads the registry and builds the index; `llm` may be replaced afterwards.
std::unique_ptr<Engine> make_engine(const PipelineConfig& config);

}  // namespace scenesmith
