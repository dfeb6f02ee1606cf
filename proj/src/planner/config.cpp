#include "scenesmith/planner/config.hpp"

#include "scenesmith/core/error.hpp"
#include "scenesmith/retrieval/retrieve.hpp"
#include "scenesmith/scene/scene_io.hpp"

namespace scenesmith {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
  if (p.empty() || p.is_absolute()) return p;
  return base / p;
}

}  // namespace

PipelineOptions PipelineConfig::options() const {
  PipelineOptions o;
  o.seed = seed;
  o.prompt = prompt;
  o.interactive = interactive;
  o.retrieval.api_threshold = api_threshold;
  return o;
}

PipelineConfig pipeline_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw SchemaError("config", "pipeline config must be a JSON object");
  PipelineConfig c;
  c.registry_dir = resolve(base_dir, j.value("registry", std::string("registry")));
  if (j.contains("llm")) {
    c.llm = backend_config_from_json(j.at("llm"));
    c.llm.cassette = resolve(base_dir, c.llm.cassette);
  }
  if (j.contains("embedder")) c.embedder = embedder_config_from_json(j.at("embedder"));
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw SchemaError("seed", "expected an unsigned integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("prompt")) c.prompt = prompt_toggles_from_json(j.at("prompt"));
  c.interactive = j.value("interactive", false);
  c.api_threshold = j.value("api_threshold", c.api_threshold);
  return c;
}

json pipeline_config_to_json(const PipelineConfig& c) {
  return {{"registry", c.registry_dir.generic_string()},
          {"llm", backend_config_to_json(c.llm)},
          {"embedder", {{"kind", c.embedder.kind}, {"dim", c.embedder.dim}, {"endpoint", c.embedder.endpoint}}},
          {"seed", c.seed},
          {"prompt", prompt_toggles_to_json(c.prompt)},
          {"interactive", c.interactive},
          {"api_threshold", c.api_threshold}};
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return pipeline_config_from_json(doc, path.parent_path());
}

std::unique_ptr<Engine> make_engine(const PipelineConfig& config) {
  auto engine = std::make_unique<Engine>();
  engine->embedder = make_embedder(config.embedder);
  engine->registry = load_registry(config.registry_dir, engine->embedder.get());
  engine->index = build_index(engine->registry, *engine->embedder);
  if (config.llm.kind != BackendKind::ScriptedMock) engine->llm = make_backend(config.llm);
  return engine;
}

}  // namespace scenesmith
