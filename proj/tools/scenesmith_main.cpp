#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scenesmith/core/error.hpp"
#include "scenesmith/eval/eval.hpp"
#include "scenesmith/llm/client.hpp"
#include "scenesmith/planner/config.hpp"
#include "scenesmith/planner/pipeline.hpp"
#include "scenesmith/registry/registry.hpp"
#include "scenesmith/retrieval/retrieve.hpp"
#include "scenesmith/scene/scene_io.hpp"
#include "scenesmith/service/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace scenesmith;

namespace {

constexpr int kExitError = 1;
constexpr int kExitFailedActions = 2;

/// Flags shared by every command that runs the pipeline.
struct EngineFlags {
  std::string config;
  std::string registry;
  std::string backend;
  std::string cassette;
  std::string model;
  std::string endpoint;
  std::string api_key_env;
  std::string script;
  std::string record;
  std::vector<std::string> disable;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config, "Pipeline config JSON");
    cmd->add_option("--registry", registry, "Registry directory (plugins/ and assets/)");
    cmd->add_option("--backend", backend, "LLM backend: replay | http | scripted-mock");
    cmd->add_option("--cassette", cassette, "Replay cassette file or directory");
    cmd->add_option("--model", model, "Model name");
    cmd->add_option("--endpoint", endpoint, "Chat-completions URL for the http backend");
    cmd->add_option("--api-key-env", api_key_env, "Environment variable holding the API key");
    cmd->add_option("--script", script, "JSON array of replies for the scripted-mock backend");
    cmd->add_option("--record", record, "Append every exchange to this cassette");
    cmd->add_option("--disable", disable, "Prompt components to leave out: role task document format examples");
    cmd->add_option("--seed", seed, "Run seed");
  }

  PipelineConfig config_value() const {
    PipelineConfig c;
    c.llm.cassette = "transcripts";
    if (!config.empty()) c = load_pipeline_config(config);
    if (!registry.empty()) c.registry_dir = registry;
    if (!backend.empty()) {
      c.llm.kind = backend == "replay"          ? BackendKind::Replay
                   : backend == "http"          ? BackendKind::Http
                   : backend == "scripted-mock" ? BackendKind::ScriptedMock
                                                : throw Error(ErrorCode::InvalidArgument, "unknown backend '" + backend + "'");
    }
    if (!cassette.empty()) c.llm.cassette = cassette;
    if (!model.empty()) c.llm.model = model;
    if (!endpoint.empty()) c.llm.endpoint = endpoint;
    if (!api_key_env.empty()) c.llm.api_key_env = api_key_env;
    if (seed) c.seed = *seed;
    for (const std::string& d : disable) {
      if (d == "role") c.prompt.role = false;
      else if (d == "task") c.prompt.task = false;
      else if (d == "document") c.prompt.document = false;
      else if (d == "format") c.prompt.format = false;
      else if (d == "examples") c.prompt.examples = false;
      else throw Error(ErrorCode::InvalidArgument, "unknown prompt component '" + d + "'");
    }
    return c;
  }

  std::unique_ptr<Engine> engine(const PipelineConfig& c) const {
    auto e = make_engine(c);
    if (c.llm.kind == BackendKind::ScriptedMock) {
      if (script.empty()) throw Error(ErrorCode::InvalidArgument, "scripted-mock needs --script");
      const json replies = json::parse(read_file(script));
      e->llm = std::make_unique<ScriptedBackend>(replies.get<std::vector<std::string>>(), c.llm.model);
    }
    if (!record.empty()) e->llm = std::make_unique<RecordingBackend>(std::move(e->llm), record);
    return e;
  }
};

void write_outputs(const fs::path& out, const PipelineResult& r) {
  fs::create_directories(out);
  write_file(out / "scene.json", canonical_dump(scene_to_json(r.scene)));
  write_file(out / "plan.json", serialize_plan(r.plan));
  write_file(out / "scene.obj", export_scene(r.scene, SceneFormat::Obj));
  write_file(out / "report.json", canonical_dump(run_report_to_json(r.report)));
}

int summarize(const PipelineResult& r, const fs::path& out) {
  std::cout << "actions: " << r.report.executed_count() << "/" << r.report.proposed_count() << " executed, "
            << r.scene.size() << " instances, output in " << out.string() << "\n";
  for (const ActionOutcome& o : r.report.outcomes) {
    if (!o.executed) std::cerr << "failed " << o.action_id << " (" << o.error_code << "): " << o.message << "\n";
  }
  return r.report.failed_count() == 0 ? 0 : kExitFailedActions;
}

json parse_answer(const std::string& line) {
  try {
    return json::parse(line);
  } catch (const json::parse_error&) {
    return line;
  }
}

json error_json(const Error& e) {
  json j{{"error", std::string(error_code_name(e.code()))}, {"message", e.what()}};
  if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
    j["source"] = p->source();
    j["line"] = p->line();
  }
  if (const auto* s = dynamic_cast<const SchemaError*>(&e)) j["field"] = s->field();
  if (const auto* p = dynamic_cast<const PipelineError*>(&e)) {
    j["stage"] = p->stage();
    j["attempts"] = p->attempt_log();
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Procedural scene synthesis from natural-language descriptions"};
  app.require_subcommand(1);
  bool json_errors = false;
  app.add_flag("--json-errors", json_errors, "Print errors as JSON on stderr");

  // generate
  auto* gen = app.add_subcommand("generate", "Plan and build a scene from a description");
  EngineFlags gen_flags;
  gen_flags.attach(gen);
  std::string gen_prompt, gen_out = "out";
  gen->add_option("--prompt", gen_prompt, "Scene description")->required();
  gen->add_option("--out", gen_out, "Output directory");

  // edit
  auto* edit = app.add_subcommand("edit", "Apply an instruction to an existing scene");
  EngineFlags edit_flags;
  edit_flags.attach(edit);
  std::string edit_scene, edit_prompt, edit_out = "out";
  edit->add_option("--scene", edit_scene, "scene-json file")->required();
  edit->add_option("--prompt", edit_prompt, "Edit instruction")->required();
  edit->add_option("--out", edit_out, "Output directory");

  // eval run
  auto* eval = app.add_subcommand("eval", "Evaluation harness");
  eval->require_subcommand(1);
  auto* eval_run = eval->add_subcommand("run", "Run a dataset and report ER@1 / SR@1");
  EngineFlags eval_flags;
  eval_flags.attach(eval_run);
  std::string dataset, eval_out = "eval_report.json";
  eval_run->add_option("--dataset", dataset, "dataset-json file")->required();
  eval_run->add_option("--out", eval_out, "Report path (a .md summary is written next to it)");

  // registry validate | index
  auto* reg = app.add_subcommand("registry", "Plugin registry tools");
  reg->require_subcommand(1);
  auto* reg_validate = reg->add_subcommand("validate", "Check descriptors and the asset catalog");
  std::string reg_dir = "registry";
  reg_validate->add_option("dir", reg_dir, "Registry directory or a single descriptor file");
  auto* reg_index = reg->add_subcommand("index", "Build the retrieval index and list its entries");
  std::string index_dir = "registry", index_out;
  reg_index->add_option("dir", index_dir, "Registry directory");
  reg_index->add_option("--out", index_out, "Write the listing here instead of stdout");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  EngineFlags serve_flags;
  serve_flags.attach(serve);
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");

  // export
  auto* exp = app.add_subcommand("export", "Convert a scene-json file");
  std::string exp_scene, exp_format = "obj", exp_out;
  exp->add_option("--scene", exp_scene, "scene-json file")->required();
  exp->add_option("--format", exp_format, "obj | scene-json");
  exp->add_option("--out", exp_out, "Output file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const PipelineConfig cfg = gen_flags.config_value();
      auto engine = gen_flags.engine(cfg);
      const PipelineResult r = run_pipeline(gen_prompt, engine->deps(), cfg.options());
      write_outputs(gen_out, r);
      return summarize(r, gen_out);
    }

    if (*edit) {
      const PipelineConfig cfg = edit_flags.config_value();
      auto engine = edit_flags.engine(cfg);
      const SceneGraph base = import_scene_json(read_file(edit_scene), edit_scene);
      PipelineOptions opts = cfg.options();
      opts.interactive = true;
      PipelineResult r = run_pipeline(edit_prompt, engine->deps(), opts, base);
      if (r.clarification) {
        for (std::size_t i = 0; i < r.clarification->fields.size(); ++i) {
          std::cerr << r.clarification->questions[i] << "\n" << r.clarification->fields[i] << "> " << std::flush;
          std::string line;
          if (!std::getline(std::cin, line) || line.empty()) {
            throw Error(ErrorCode::ClarificationNeeded, "no answer for " + r.clarification->fields[i]);
          }
          opts.answers[r.clarification->fields[i]] = parse_answer(line);
        }
        r = run_pipeline(edit_prompt, engine->deps(), opts, base);
      }
      write_outputs(edit_out, r);
      return summarize(r, edit_out);
    }

    if (*eval_run) {
      const PipelineConfig cfg = eval_flags.config_value();
      auto engine = eval_flags.engine(cfg);
      const EvalDataset ds = load_dataset(dataset);
      const EvalReport report = run_suite(ds, engine->deps(), cfg.options());
      if (fs::path(eval_out).has_parent_path()) fs::create_directories(fs::path(eval_out).parent_path());
      write_file(eval_out, canonical_dump(eval_report_to_json(report)));
      fs::path md = eval_out;
      md.replace_extension(".md");
      write_file(md, eval_report_markdown(report));
      std::cout << "ER@1 " << format_percent(report.metrics.er_at_1) << "  SR@1 "
                << format_percent(report.metrics.sr_at_1) << "  (" << report.metrics.executed << "/"
                << report.metrics.total << " executed, " << report.metrics.correct << " correct)\n";
      return 0;
    }

    if (*reg_validate) {
      MockEmbedder embedder;
      if (fs::is_regular_file(reg_dir)) {
        const PluginDescriptor d = parse_descriptor(read_file(reg_dir), reg_dir);
        std::cout << "ok: " << d.name << "\n";
        return 0;
      }
      const Registry r = load_registry(reg_dir, &embedder);
      std::cout << "ok: " << r.descriptors().size() << " plugins, " << r.assets().size() << " assets\n";
      return 0;
    }

    if (*reg_index) {
      MockEmbedder embedder;
      const Registry r = load_registry(index_dir, &embedder);
      const EmbeddingIndex index = build_index(r, embedder);
      json entries = json::array();
      for (const auto& [name, d] : r.descriptors()) entries.push_back({{"key", name}, {"kind", "api"}});
      for (const auto& [id, a] : r.assets()) entries.push_back({{"key", id}, {"kind", "asset"}});
      const json listing{{"dim", index.dim()},
                         {"apis", index.count(EntryKind::Api)},
                         {"assets", index.count(EntryKind::Asset)},
                         {"entries", entries}};
      if (index_out.empty()) std::cout << canonical_dump(listing);
      else write_file(index_out, canonical_dump(listing));
      return 0;
    }

    if (*serve) {
      const PipelineConfig cfg = serve_flags.config_value();
      auto engine = serve_flags.engine(cfg);
      ServiceOptions opts;
      opts.default_seed = cfg.seed;
      opts.pipeline = cfg.options();
      if (const char* dir = std::getenv("SCENESMITH_DATA_DIR")) opts.data_dir = fs::path(dir);
      Service service(*engine, opts);
      std::cerr << "serving on " << host << ":" << port << "\n";
      service.listen(host, port);
      return 0;
    }

    if (*exp) {
      const SceneGraph scene = import_scene_json(read_file(exp_scene), exp_scene);
      const std::string bytes = export_scene(scene, parse_scene_format(exp_format));
      if (exp_out.empty()) std::cout << bytes;
      else write_file(exp_out, bytes);
      return 0;
    }
  } catch (const Error& e) {
    if (json_errors) std::cerr << error_json(e).dump() << "\n";
    else std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    if (json_errors) std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    else std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
