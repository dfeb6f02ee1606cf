#include "scenesmith/plan/executor.hpp"

#include <algorithm>
#include <cctype>

#include "scenesmith/core/error.hpp"
#include "scenesmith/layout/generators.hpp"
#include "scenesmith/layout/relation.hpp"
#include "scenesmith/terrain/terrain.hpp"

namespace scenesmith {

using nlohmann::json;

namespace {

/// An object whose instances a later PlaceLayout creates.
struct Declared {
  std::string object;
  std::string asset_ref;
  std::set<std::string> tags;
};

std::string param_tag(const std::string& name, const json& v) {
  return "param:" + name + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
}

class Executor {
 public:
  Executor(const ActionPlan& plan, const Registry& registry, SceneGraph scene)
      : plan_(plan), registry_(registry), scene_(std::move(scene)) {}

  ExecutionResult run() {
    RunReport report;
    report.seed = plan_.seed;
    report.diagnostics = validate_plan(plan_, registry_, &scene_);
    for (const Action& action : plan_.actions) {
      ActionOutcome outcome;
      outcome.action_id = action_id(action);
      outcome.kind = std::string(action_kind_name(action));
      try {
        std::visit([&](const auto& a) { apply(a, outcome); }, action);
        outcome.executed = true;
      } catch (const Error& e) {
        outcome.executed = false;
        outcome.error_code = std::string(error_code_name(e.code()));
        outcome.message = e.what();
      }
      report.outcomes.push_back(std::move(outcome));
    }
    report.end_flag = true;
    return {std::move(scene_), std::move(report)};
  }

 private:
  void apply(const GenerateTerrainAction& a, ActionOutcome&) {
    scene_.set_terrain(generate_heightfield(a.params));
  }

  void apply(const InvokeApiAction& a, ActionOutcome& outcome) {
    const PluginDescriptor* d = registry_.descriptor(a.plugin);
    if (d == nullptr) throw Error(ErrorCode::UnresolvedReference, "plugin '" + a.plugin + "' is not registered");
    const auto missing = missing_required(*d, a.params);
    if (!missing.empty()) {
      throw Error(ErrorCode::InvalidParams, "required parameter '" + missing.front() + "' missing");
    }
    const ParamAssignment full = fill_defaults(*d, a.params);
    if (a.region) a.region->validate();

    Declared decl{a.object, "plugin:" + a.plugin, {object_tag(a.object), "plugin:" + a.plugin}};
    for (const auto& [k, v] : full.values) decl.tags.insert(param_tag(k, v));
    declare(a.id, a.layout_ref, a.count, a.transform, std::move(decl), outcome);
    if (a.region) scene_.set_region(a.object, *a.region);
  }

  void apply(const ImportAssetAction& a, ActionOutcome& outcome) {
    const AssetRecord* asset = registry_.asset(a.asset);
    if (asset == nullptr) throw Error(ErrorCode::UnresolvedReference, "asset '" + a.asset + "' is not in the catalog");
    Declared decl{a.object, asset->id, {object_tag(a.object), "category:" + asset->category}};
    declare(a.id, a.layout_ref, a.count, a.transform, std::move(decl), outcome);
  }

  void apply(const PlaceLayoutAction& a, ActionOutcome& outcome) {
    auto it = declared_.find(a.object_ref);
    if (it == declared_.end()) {
      throw Error(ErrorCode::UnresolvedReference, "object '" + a.object_ref + "' was not declared by an executed action");
    }
    Placement placement = generate_layout(a.layout);
    if (a.project_to_terrain) {
      if (!scene_.terrain()) throw Error(ErrorCode::InvalidSpec, "no terrain to project onto");
      placement = project_to_terrain(std::move(placement), *scene_.terrain());
    }
    if (placement.saturated) outcome.notes.push_back("saturated");
    if (placement.footprint_too_large) outcome.notes.push_back("footprint_too_large");
    if (placement.dropped > 0) outcome.notes.push_back("dropped " + std::to_string(placement.dropped) + " off terrain");

    std::vector<AssetInstance> batch;
    std::vector<std::string> ids;
    for (const PlacedItem& item : placement.items) {
      AssetInstance inst = make_instance(it->second, item.transform, ids);
      inst.terrain_projected = a.project_to_terrain;
      if (!item.group.empty()) {
        std::string path;
        for (std::size_t g : item.group) path += (path.empty() ? "" : "/") + std::to_string(g);
        inst.tags.insert("group:" + path);
      }
      batch.push_back(std::move(inst));
    }
    commit(std::move(batch), outcome);
  }

  void declare(const std::string& id, const std::optional<std::string>& layout_ref, std::size_t count,
               const std::optional<Transform>& transform, Declared decl, ActionOutcome& outcome) {
    if (layout_ref) {
      declared_[id] = std::move(decl);
      return;
    }
    const Transform t = transform.value_or(Transform{});
    t.validate();
    std::vector<AssetInstance> batch;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < count; ++i) batch.push_back(make_instance(decl, t, ids));
    commit(std::move(batch), outcome);
    declared_[id] = std::move(decl);
  }

  AssetInstance make_instance(const Declared& decl, const Transform& t, std::vector<std::string>& ids) {
    const std::string prefix = instance_prefix(decl.object);
    // Ids must also avoid the ones handed out earlier in this uncommitted batch.
    std::size_t& next = counters_[prefix];
    std::string id;
    do {
      char buf[32];
      std::snprintf(buf, sizeof buf, "_%04zu", next++);
      id = prefix + buf;
    } while (scene_.contains(id) || std::find(ids.begin(), ids.end(), id) != ids.end());
    ids.push_back(id);
    return AssetInstance{id, decl.asset_ref, t, decl.tags, false};
  }

  void commit(std::vector<AssetInstance> batch, ActionOutcome& outcome) {
    for (const AssetInstance& inst : batch) inst.transform.validate();
    for (AssetInstance& inst : batch) scene_.add_instance(std::move(inst));
    outcome.instances_added += batch.size();
  }

  const ActionPlan& plan_;
  const Registry& registry_;
  SceneGraph scene_;
  std::map<std::string, Declared> declared_;
  std::map<std::string, std::size_t> counters_;
};

}  // namespace

std::size_t RunReport::executed_count() const {
  return static_cast<std::size_t>(
      std::count_if(outcomes.begin(), outcomes.end(), [](const ActionOutcome& o) { return o.executed; }));
}

std::string instance_prefix(const std::string& object_name) {
  std::string out;
  for (unsigned char c : object_name) {
    out += std::isalnum(c) ? static_cast<char>(std::tolower(c)) : '_';
  }
  return out.empty() ? "object" : out;
}

json run_report_to_json(const RunReport& r) {
  json outcomes = json::array();
  for (const ActionOutcome& o : r.outcomes) {
    outcomes.push_back({{"action_id", o.action_id},
                        {"kind", o.kind},
                        {"executed", o.executed},
                        {"stage", o.stage},
                        {"error_code", o.error_code},
                        {"message", o.message},
                        {"instances_added", o.instances_added},
                        {"notes", o.notes}});
  }
  json diags = json::array();
  for (const Diagnostic& d : r.diagnostics) diags.push_back(diagnostic_to_json(d));
  json retries = json::object();
  for (const auto& [k, v] : r.retries) retries[k] = v;
  return {{"seed", r.seed},
          {"query", r.query},
          {"outcomes", outcomes},
          {"diagnostics", diags},
          {"log", r.log},
          {"assumptions", r.assumptions},
          {"retries", retries},
          {"end_flag", r.end_flag},
          {"proposed_count", r.proposed_count()},
          {"executed_count", r.executed_count()},
          {"failed_count", r.failed_count()}};
}

RunReport run_report_from_json(const json& j) {
  RunReport r;
  r.seed = j.at("seed").get<std::uint64_t>();
  r.query = j.value("query", std::string());
  for (const json& o : j.at("outcomes")) {
    ActionOutcome out;
    out.action_id = o.at("action_id").get<std::string>();
    out.kind = o.at("kind").get<std::string>();
    out.executed = o.at("executed").get<bool>();
    out.stage = o.value("stage", std::string("execute"));
    out.error_code = o.value("error_code", std::string());
    out.message = o.value("message", std::string());
    out.instances_added = o.value("instances_added", std::size_t{0});
    out.notes = o.value("notes", std::vector<std::string>{});
    r.outcomes.push_back(std::move(out));
  }
  for (const json& d : j.value("diagnostics", json::array())) {
    r.diagnostics.push_back({d.at("action_id").get<std::string>(), d.at("code").get<std::string>(),
                             d.at("message").get<std::string>()});
  }
  r.log = j.value("log", std::vector<std::string>{});
  r.assumptions = j.value("assumptions", std::vector<std::string>{});
  const json retries = j.value("retries", json::object());
  for (const auto& [k, v] : retries.items()) r.retries[k] = v.get<int>();
  r.end_flag = j.value("end_flag", false);
  return r;
}

ExecutionResult execute_plan(const ActionPlan& plan, const Registry& registry, const std::optional<SceneGraph>& base) {
  return Executor(plan, registry, base ? *base : SceneGraph(plan.seed)).run();
}

}  // namespace scenesmith
