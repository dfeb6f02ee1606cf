#include "scenesmith/eval/eval.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "scenesmith/core/error.hpp"
#include "scenesmith/layout/relation.hpp"
#include "scenesmith/planner/agents.hpp"
#include "scenesmith/scene/scene_io.hpp"

namespace scenesmith {

using nlohmann::json;

namespace {

const std::set<std::string>& check_types() {
  static const std::set<std::string> types{"instance_count", "action_count",  "inside_region",
                                           "has_terrain",    "min_separation", "param_equals"};
  return types;
}

std::vector<const AssetInstance*> instances_of(const SceneGraph& scene, const json& spec) {
  std::vector<const AssetInstance*> out;
  const bool filtered = spec.contains("object") && spec.at("object").is_string();
  const std::string tag = filtered ? object_tag(spec.at("object").get<std::string>()) : std::string();
  for (const AssetInstance& inst : scene.instances()) {
    if (!filtered || inst.tags.count(tag) != 0) out.push_back(&inst);
  }
  return out;
}

CheckResult in_range(std::size_t n, const json& spec, const std::string& what) {
  const double lo = spec.value("min", 0.0);
  const double hi = spec.value("max", INFINITY);
  const auto v = static_cast<double>(n);
  CheckResult r;
  r.passed = v >= lo && v <= hi;
  r.detail = what + " = " + std::to_string(n);
  return r;
}

}  // namespace

EvalDataset dataset_from_json(const json& j) {
  if (!j.is_object() || j.value("schema", std::string()) != kDatasetSchema) {
    throw Error(ErrorCode::DatasetError, "dataset must be a JSON object with schema '" + std::string(kDatasetSchema) + "'");
  }
  EvalDataset d;
  d.name = j.value("name", std::string("dataset"));
  if (!j.contains("cases") || !j.at("cases").is_array() || j.at("cases").empty()) {
    throw Error(ErrorCode::DatasetError, "dataset has no cases");
  }
  std::set<std::string> ids;
  for (const json& c : j.at("cases")) {
    EvalCase ec;
    try {
      ec.id = c.at("id").get<std::string>();
      ec.text = c.at("text").get<std::string>();
      if (c.contains("seed")) ec.seed = c.at("seed").get<std::uint64_t>();
      for (const json& chk : c.at("checks")) {
        const std::string type = chk.at("type").get<std::string>();
        if (check_types().count(type) == 0) {
          throw Error(ErrorCode::DatasetError, "case '" + ec.id + "': unknown check type '" + type + "'");
        }
        ec.checks.push_back({type, chk});
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::DatasetError, std::string("malformed case: ") + e.what());
    }
    if (ec.checks.empty()) throw Error(ErrorCode::DatasetError, "case '" + ec.id + "' has no checks");
    if (!ids.insert(ec.id).second) throw Error(ErrorCode::DatasetError, "duplicate case id '" + ec.id + "'");
    d.cases.push_back(std::move(ec));
  }
  return d;
}

EvalDataset load_dataset(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::DatasetError, e.what());
  }
  try {
    return dataset_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::DatasetError, path.string() + ": " + e.what());
  }
}

CheckResult evaluate_check(const EvalCheck& check, const SceneGraph& scene, const ActionPlan& plan) {
  const json& s = check.spec;
  try {
    if (check.type == "instance_count") {
      return in_range(instances_of(scene, s).size(), s, "instances");
    }
    if (check.type == "action_count") {
      const std::string kind = s.at("kind").get<std::string>();
      std::size_t n = 0;
      for (const Action& a : plan.actions) n += action_kind_name(a) == kind ? 1 : 0;
      return in_range(n, s, kind + " actions");
    }
    if (check.type == "has_terrain") {
      return {scene.terrain().has_value(), scene.terrain() ? "terrain present" : "no terrain"};
    }
    if (check.type == "inside_region") {
      const Region region = region_from_json(s.at("region"));
      std::size_t outside = 0;
      for (const AssetInstance* inst : instances_of(scene, s)) {
        if (!region.contains({inst->transform.position.x, inst->transform.position.y}, 1e-9)) ++outside;
      }
      return {outside == 0, std::to_string(outside) + " instance(s) outside the region"};
    }
    if (check.type == "min_separation") {
      const double d = s.at("distance").get<double>();
      const auto insts = instances_of(scene, s);
      std::size_t violations = 0;
      for (std::size_t i = 0; i < insts.size(); ++i) {
        for (std::size_t k = i + 1; k < insts.size(); ++k) {
          const double dx = insts[i]->transform.position.x - insts[k]->transform.position.x;
          const double dy = insts[i]->transform.position.y - insts[k]->transform.position.y;
          if (std::hypot(dx, dy) < d) ++violations;
        }
      }
      return {violations == 0, std::to_string(violations) + " pair(s) closer than " + format_double(d)};
    }
    if (check.type == "param_equals") {
      const json& v = s.at("value");
      const std::string tag =
          "param:" + s.at("param").get<std::string>() + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
      const auto insts = instances_of(scene, s);
      std::size_t missing = 0;
      for (const AssetInstance* inst : insts) missing += inst->tags.count(tag) == 0 ? 1 : 0;
      return {!insts.empty() && missing == 0,
              insts.empty() ? "no matching instances" : std::to_string(missing) + " instance(s) without " + tag};
    }
  } catch (const std::exception& e) {
    return {false, std::string("check could not be evaluated: ") + e.what()};
  }
  return {false, "unknown check type '" + check.type + "'"};
}

CaseOutcome judge_case(const EvalCase& c, const SceneGraph& scene, const ActionPlan& plan, const RunReport& report) {
  CaseOutcome out;
  out.id = c.id;
  out.executed = report.proposed_count() > 0 && report.failed_count() == 0;
  for (const ActionOutcome& o : report.outcomes) {
    if (o.executed) continue;
    out.error += (out.error.empty() ? "failed " : ", ") + o.action_id + " (" + o.error_code + ")";
  }
  bool all_pass = true;
  for (std::size_t i = 0; i < c.checks.size(); ++i) {
    const CheckResult r = evaluate_check(c.checks[i], scene, plan);
    if (!r.passed) {
      all_pass = false;
      out.failed_checks.push_back(c.checks[i].type + " #" + std::to_string(i) + ": " + r.detail);
    }
  }
  out.correct = out.executed && all_pass;
  return out;
}

Metrics compute_metrics(const std::vector<CaseOutcome>& outcomes) {
  if (outcomes.empty()) throw Error(ErrorCode::EmptyOutcomes, "no outcomes to aggregate");
  Metrics m;
  m.total = outcomes.size();
  for (const CaseOutcome& o : outcomes) {
    m.executed += o.executed ? 1 : 0;
    m.correct += o.executed && o.correct ? 1 : 0;
  }
  m.er_at_1 = 100.0 * static_cast<double>(m.executed) / static_cast<double>(m.total);
  if (m.executed == 0) {
    m.sr_undefined = true;
    m.sr_at_1 = 0.0;
  } else {
    m.sr_at_1 = 100.0 * static_cast<double>(m.correct) / static_cast<double>(m.executed);
  }
  return m;
}

EvalReport run_suite(const EvalDataset& dataset, const PipelineDeps& deps, const PipelineOptions& options) {
  if (dataset.cases.empty()) throw Error(ErrorCode::DatasetError, "dataset has no cases");
  EvalReport report;
  report.dataset = dataset.name;
  report.prompt = options.prompt;
  for (const EvalCase& c : dataset.cases) {
    PipelineOptions opts = options;
    opts.interactive = false;
    if (c.seed) opts.seed = *c.seed;
    try {
      const PipelineResult r = run_pipeline(c.text, deps, opts);
      report.outcomes.push_back(judge_case(c, r.scene, r.plan, r.report));
      report.prompt_log.push_back(r.report.log.empty() ? std::string() : r.report.log.front());
    } catch (const Error& e) {
      CaseOutcome out;
      out.id = c.id;
      out.error = std::string(error_code_name(e.code())) + ": " + e.what();
      report.outcomes.push_back(std::move(out));
      report.prompt_log.emplace_back();
    }
  }
  report.metrics = compute_metrics(report.outcomes);
  return report;
}

std::string format_percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

json metrics_to_json(const Metrics& m) {
  return {{"total", m.total},
          {"executed", m.executed},
          {"correct", m.correct},
          {"er_at_1", m.er_at_1},
          {"sr_at_1", m.sr_at_1},
          {"er_at_1_text", format_percent(m.er_at_1)},
          {"sr_at_1_text", format_percent(m.sr_at_1)},
          {"sr_undefined", m.sr_undefined}};
}

json eval_report_to_json(const EvalReport& r) {
  json outcomes = json::array();
  for (const CaseOutcome& o : r.outcomes) {
    outcomes.push_back({{"id", o.id},
                        {"executed", o.executed},
                        {"correct", o.correct},
                        {"failed_checks", o.failed_checks},
                        {"error", o.error}});
  }
  return {{"dataset", r.dataset},
          {"prompt", prompt_toggles_to_json(r.prompt)},
          {"metrics", metrics_to_json(r.metrics)},
          {"outcomes", outcomes},
          {"prompt_log", r.prompt_log}};
}

std::string eval_report_markdown(const EvalReport& r) {
  std::string md = "# Evaluation: " + r.dataset + "\n\n";
  md += "| Cases | Executed | Correct | ER@1 | SR@1 |\n|---|---|---|---|---|\n";
  md += "| " + std::to_string(r.metrics.total) + " | " + std::to_string(r.metrics.executed) + " | " +
        std::to_string(r.metrics.correct) + " | " + format_percent(r.metrics.er_at_1) + " | " +
        format_percent(r.metrics.sr_at_1) + (r.metrics.sr_undefined ? " (nothing executed)" : "") + " |\n\n";
  md += "| Case | Executed | Correct | Notes |\n|---|---|---|---|\n";
  for (const CaseOutcome& o : r.outcomes) {
    std::string notes = o.error;
    for (const std::string& f : o.failed_checks) notes += (notes.empty() ? "" : "; ") + f;
    md += "| " + o.id + " | " + (o.executed ? "yes" : "no") + " | " + (o.correct ? "yes" : "no") + " | " + notes + " |\n";
  }
  return md;
}

}  // namespace scenesmith
