#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scenesmith/plan/action_plan.hpp"
#include "scenesmith/plan/executor.hpp"
#include "scenesmith/planner/pipeline.hpp"
#include "scenesmith/scene/scene_graph.hpp"

namespace scenesmith {

inline constexpr std::string_view kDatasetSchema = "eval/1";

/// One programmatic assertion about a pipeline result. Supported types:
///   instance_count {object?, min?, max?}     instances (of the object, else all) in [min, max]
///   action_count   {kind, min?, max?}        plan actions of that kind in [min, max]
///   inside_region  {object?, region}         every such instance's XY inside the region
///   has_terrain    {}                        the scene carries a heightfield
///   min_separation {object?, distance}       pairwise XY distance >= distance
///   param_equals   {object, param, value}    every instance carries param:<param>=<value>
struct EvalCheck {
  std::string type;
  nlohmann::json spec;

  friend bool operator==(const EvalCheck&, const EvalCheck&) = default;
};

struct EvalCase {
  std::string id;
  std::string text;
  std::vector<EvalCheck> checks;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const EvalCase&, const EvalCase&) = default;
};

struct EvalDataset {
  std::string name;
  std::vector<EvalCase> cases;
};

/// Throws DatasetError: wrong schema, no cases, a case without checks, unknown check type.
EvalDataset dataset_from_json(const nlohmann::json& j);
EvalDataset load_dataset(const std::filesystem::path& path);

struct CheckResult {
  bool passed = false;
  std::string detail;
};

CheckResult evaluate_check(const EvalCheck& check, const SceneGraph& scene, const ActionPlan& plan);

struct CaseOutcome {
  std::string id;
  bool executed = false;
  bool correct = false;  // implies executed
  std::vector<std::string> failed_checks;
  std::string error;

  friend bool operator==(const CaseOutcome&, const CaseOutcome&) = default;
};

/// executed: every proposed action ran; correct: executed and every check passed.
CaseOutcome judge_case(const EvalCase& c, const SceneGraph& scene, const ActionPlan& plan, const RunReport& report);

struct Metrics {
  std::size_t total = 0;
  std::size_t executed = 0;
  std::size_t correct = 0;
  double er_at_1 = 0.0;  // 100 * executed / total
  double sr_at_1 = 0.0;  // 100 * correct / executed
  bool sr_undefined = false;  // nothing executed; sr reported as 0

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// Throws EmptyOutcomes.
Metrics compute_metrics(const std::vector<CaseOutcome>& outcomes);

struct EvalReport {
  std::string dataset;
  PromptToggles prompt;
  Metrics metrics;
  std::vector<CaseOutcome> outcomes;
  std::vector<std::string> prompt_log;  // decomposition request summary of each case
};

/// Runs the pipeline for every case (non-interactively) and aggregates.
EvalReport run_suite(const EvalDataset& dataset, const PipelineDeps& deps, const PipelineOptions& options);

nlohmann::json metrics_to_json(const Metrics& m);
nlohmann::json eval_report_to_json(const EvalReport& r);
std::string eval_report_markdown(const EvalReport& r);

/// Two-decimal rendering used in reports ("86.05").
std::string format_percent(double v);

}  // namespace scenesmith
