#include "scenesmith/planner/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "scenesmith/core/error.hpp"
#include "scenesmith/core/hash.hpp"
#include "scenesmith/scene/scene_io.hpp"
#include "scenesmith/terrain/terrain.hpp"

namespace scenesmith {

using nlohmann::json;

namespace {

// Seed streams derived from the run seed.
constexpr std::uint64_t kTerrainStream = 1;
constexpr std::uint64_t kRetrievalStream = 100;
constexpr std::uint64_t kLayoutStream = 1000;

bool is_terrain_descriptor(const PluginDescriptor* d) { return d != nullptr && d->capability == "terrain"; }

const PluginDescriptor* first_terrain_descriptor(const Registry& registry) {
  for (const auto& [name, d] : registry.descriptors()) {
    if (is_terrain_descriptor(&d)) return &d;
  }
  return nullptr;
}

/// Plugin named by one of the object's module hints, if any.
const PluginDescriptor* hinted_plugin(const ObjectPlan& o, const Registry& registry) {
  for (const auto& [module, request] : o.module_hints) {
    if (const PluginDescriptor* d = registry.descriptor(module)) return d;
  }
  return nullptr;
}

std::string retrieval_text(const ObjectPlan& o) {
  std::string text;
  for (const auto& [module, request] : o.module_hints) text += (text.empty() ? "" : " ") + request;
  return text.empty() ? (o.description.empty() ? o.name : o.description) : text;
}

std::string agent_summary(const AgentLog& log, const std::string& subject) {
  std::string s = log.stage + (subject.empty() ? "" : " " + subject) + ": attempts=" + std::to_string(log.attempts) + " requests=";
  for (std::size_t i = 0; i < log.request_hashes.size(); ++i) s += (i ? "," : "") + log.request_hashes[i];
  return s;
}

class Planner {
 public:
  Planner(std::string_view query, const PipelineDeps& deps, const PipelineOptions& options,
          const std::optional<SceneGraph>& base)
      : query_(query), deps_(deps), options_(options), base_(base) {
    plan_.seed = options.seed;
    report_.query = std::string(query);
    report_.seed = options.seed;
  }

  PipelineResult run() {
    try {
      return run_stages();
    } catch (const PipelineError& e) {
      throw PipelineError(e.stage(), e.attempt_log(), e.what(), plan_to_json(plan_));
    }
  }

 private:
  PipelineResult run_stages() {
    const DecomposeResult dec = decompose(query_, deps_.llm, deps_.registry, options_.prompt);
    note_agent(dec.log);
    objects_ = dec.objects;

    plan_terrain();
    declare_objects();
    if (clarification_) return paused();
    plan_relations();

    ExecutionResult exec = execute_plan(plan_, deps_.registry, base_);
    RunReport report = std::move(exec.report);
    report.query = report_.query;
    report.seed = report_.seed;
    for (ActionOutcome& o : planning_failures_) report.outcomes.push_back(std::move(o));
    report.log = std::move(report_.log);
    report.assumptions = std::move(report_.assumptions);
    report.retries = std::move(report_.retries);
    report.end_flag = true;

    PipelineResult result;
    result.objects = objects_;
    result.relations = relations_;
    result.plan = plan_;
    result.scene = std::move(exec.scene);
    result.report = std::move(report);
    return result;
  }

  struct Declaration {
    std::size_t object_index;
    std::size_t action_index;
    const PluginDescriptor* plugin;  // null for imported assets
  };

  std::string next_action_id() {
    char buf[32];
    std::snprintf(buf, sizeof buf, "act_%03zu", plan_.actions.size());
    return buf;
  }

  void note_agent(const AgentLog& log, const std::string& subject = {}) {
    report_.log.push_back(agent_summary(log, subject));
    for (std::size_t i = 0; i < log.errors.size(); ++i) {
      report_.log.push_back(log.stage + ": attempt " + std::to_string(i + 1) + " rejected: " + log.errors[i]);
    }
    report_.retries[log.stage] += log.retries();
  }

  void fail_in_planning(const std::string& id, const std::string& kind, const Error& e) {
    ActionOutcome o;
    o.action_id = id;
    o.kind = kind;
    o.stage = "plan";
    o.error_code = std::string(error_code_name(e.code()));
    o.message = e.what();
    report_.log.push_back("planning failed for " + id + ": " + o.message);
    planning_failures_.push_back(std::move(o));
  }

  /// Fills required params from answers or, in non-interactive runs, from assumptions.
  /// Returns false when an interactive run must ask first.
  bool settle_required(const PluginDescriptor& d, const ObjectPlan& o, ParamValues& values) {
    bool settled = true;
    for (const std::string& name : missing_required(d, values)) {
      const std::string field = o.name + "." + name;
      const ParamSpec& spec = *d.param(name);
      if (auto it = options_.answers.find(field); it != options_.answers.end()) {
        const CheckedValue c = check_param_value(spec, it->second);
        if (!c.value) throw Error(ErrorCode::InvalidParams, "answer for " + field + ": " + c.reason);
        values[name] = *c.value;
        report_.log.push_back("clarified " + field);
        continue;
      }
      if (options_.interactive) {
        if (!clarification_) clarification_.emplace();
        clarification_->fields.push_back(field);
        std::string q = "What " + name + " should the " + o.name + " have? " + spec.description;
        if (!spec.options.empty()) {
          q += " Options:";
          for (const std::string& opt : spec.options) q += " " + opt;
        }
        clarification_->questions.push_back(q);
        settled = false;
        continue;
      }
      values[name] = assumed_value(spec);
      report_.assumptions.push_back(field + " = " + (values[name].is_string() ? values[name].get<std::string>()
                                                                              : values[name].dump()));
    }
    return settled;
  }

  void plan_terrain() {
    const PluginDescriptor* d = nullptr;
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      const PluginDescriptor* hinted = hinted_plugin(objects_[i], deps_.registry);
      const bool named = objects_[i].name == "terrain";
      if (is_terrain_descriptor(hinted) || (named && first_terrain_descriptor(deps_.registry) != nullptr)) {
        terrain_object_ = i;
        d = is_terrain_descriptor(hinted) ? hinted : first_terrain_descriptor(deps_.registry);
        break;
      }
      if (named) {
        terrain_object_ = i;
        break;
      }
    }
    const bool base_has_terrain = base_ && base_->terrain();
    if (!terrain_object_ && base_has_terrain) return;

    const std::uint64_t seed = derive_seed(options_.seed, kTerrainStream);
    ParamValues values;
    if (d != nullptr) {
      const HyperparamResult hp = generate_hyperparams(*d, objects_[*terrain_object_], deps_.llm, options_.prompt);
      note_agent(hp.log, objects_[*terrain_object_].name);
      values = hp.assignment.values;
      settle_required(*d, objects_[*terrain_object_], values);
    } else {
      const PluginDescriptor* fallback = first_terrain_descriptor(deps_.registry);
      if (fallback != nullptr) values = fill_defaults(*fallback, {}).values;
      report_.assumptions.push_back("terrain = defaults (no terrain object in the description)");
    }
    plan_.actions.push_back(GenerateTerrainAction{next_action_id(), terrain_params_from_values(values, seed)});
  }

  void declare_objects() {
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      if (terrain_object_ && *terrain_object_ == i) continue;
      const ObjectPlan& o = objects_[i];
      const PluginDescriptor* d = hinted_plugin(o, deps_.registry);
      std::optional<RetrievalHit> hit;
      if (d != nullptr) {
        report_.log.push_back("retrieve " + o.name + ": api " + d->name + " (module hint)");
      } else {
        try {
          hit = retrieve(deps_.index, retrieval_text(o), deps_.embedder,
                         derive_seed(options_.seed, kRetrievalStream + i), options_.retrieval);
        } catch (const Error& e) {
          fail_in_planning("plan:" + o.name, "ImportAsset", e);
          continue;
        }
        if (hit->kind == EntryKind::Api) d = deps_.registry.descriptor(hit->key);
        report_.log.push_back("retrieve " + o.name + ": " + (d ? "api " : "asset ") + hit->key + " (score " +
                              format_double(hit->score) + ")");
      }

      if (d != nullptr) {
        const HyperparamResult hp = generate_hyperparams(*d, o, deps_.llm, options_.prompt);
        note_agent(hp.log, o.name);
        ParamValues values = hp.assignment.values;
        settle_required(*d, o, values);
        InvokeApiAction a;
        a.id = next_action_id();
        a.object = o.name;
        a.plugin = d->name;
        a.params = std::move(values);
        a.count = o.count;
        declarations_.push_back({i, plan_.actions.size(), d});
        plan_.actions.push_back(std::move(a));
      } else {
        ImportAssetAction a;
        a.id = next_action_id();
        a.object = o.name;
        a.asset = hit->key;
        a.count = o.count;
        declarations_.push_back({i, plan_.actions.size(), nullptr});
        plan_.actions.push_back(std::move(a));
      }
    }
  }

  std::optional<std::size_t> object_index(const std::string& name) const {
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      if (objects_[i].name == name) return i;
    }
    return std::nullopt;
  }

  Declaration* declaration_for(std::size_t object_index) {
    for (Declaration& d : declarations_) {
      if (d.object_index == object_index) return &d;
    }
    return nullptr;
  }

  SceneGraph preview() const { return execute_plan(plan_, deps_.registry, base_).scene; }

  /// Single instance at the terrain center; plugins with a radius also register a disc region.
  void place_at_center(Declaration& decl) {
    const SceneGraph scene = preview();
    Transform t;
    if (scene.terrain()) {
      const Heightfield& hf = *scene.terrain();
      t.position = {0.5 * hf.size_x, 0.5 * hf.size_y, sample_height(hf, 0.5 * hf.size_x, 0.5 * hf.size_y)};
    }
    Action& action = plan_.actions[decl.action_index];
    if (auto* a = std::get_if<InvokeApiAction>(&action)) {
      a->transform = t;
      if (auto it = a->params.find("radius"); it != a->params.end() && it->second.is_number()) {
        a->region = Region::disc({t.position.x, t.position.y}, it->second.get<double>());
      }
    } else {
      std::get<ImportAssetAction>(action).transform = t;
    }
  }

  void set_layout_ref(const Declaration& decl, const std::string& layout_id) {
    std::visit(
        [&](auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, InvokeApiAction> || std::is_same_v<T, ImportAssetAction>) {
            a.layout_ref = layout_id;
          }
        },
        plan_.actions[decl.action_index]);
  }

  std::string anchor_name(const std::string& anchor) const {
    if (terrain_object_ && objects_[*terrain_object_].name == anchor) return "terrain";
    return anchor;
  }

  void plan_relations() {
    std::vector<ObjectPlan> non_terrain;
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      if (!terrain_object_ || *terrain_object_ != i) non_terrain.push_back(objects_[i]);
    }
    if (!non_terrain.empty()) {
      const RelationResult rr = extract_relations(objects_, deps_.llm, options_.prompt);
      note_agent(rr.log);
      relations_ = rr.relations;
    }

    // Primary relation and avoid masks per object.
    std::map<std::size_t, SpatialRelation> primary;
    std::map<std::size_t, std::vector<SpatialRelation>> avoids;
    for (SpatialRelation rel : relations_) {
      rel.anchor = anchor_name(rel.anchor);
      const auto idx = object_index(rel.subject);
      if (!idx || declaration_for(*idx) == nullptr) {
        fail_in_planning("plan:" + rel.subject + ":" + std::string(relation_kind_name(rel.kind)), "PlaceLayout",
                         Error(ErrorCode::UnresolvedReference, "relation subject '" + rel.subject + "' is not a placeable object"));
        continue;
      }
      if (rel.kind == RelationKind::Avoid) avoids[*idx].push_back(rel);
      if (primary.count(*idx) == 0 && rel.kind != RelationKind::Avoid) {
        primary.emplace(*idx, rel);
      } else if (rel.kind != RelationKind::Avoid) {
        report_.log.push_back("relation ignored: " + rel.subject + " " + std::string(relation_kind_name(rel.kind)) +
                              " " + rel.anchor + " (subject already placed)");
      }
    }
    for (const auto& [idx, list] : avoids) {
      if (primary.count(idx) == 0) primary.emplace(idx, list.front());
    }

    // Objects without relations: several copies scatter over the terrain, one sits at the center.
    for (Declaration& decl : declarations_) {
      if (primary.count(decl.object_index) != 0) continue;
      const ObjectPlan& o = objects_[decl.object_index];
      if (o.count > 1 && (preview().terrain())) {
        primary.emplace(decl.object_index, SpatialRelation{o.name, "terrain", RelationKind::On, {}});
        report_.assumptions.push_back(o.name + " on terrain (no relation given)");
      } else {
        place_at_center(decl);
      }
    }

    // Resolve in dependency order: an anchor that is itself a pending subject goes first.
    std::set<std::size_t> pending;
    for (const auto& [idx, rel] : primary) pending.insert(idx);
    bool progress = true;
    while (!pending.empty() && progress) {
      progress = false;
      for (auto it = pending.begin(); it != pending.end();) {
        const SpatialRelation& rel = primary.at(*it);
        const auto anchor_idx = object_index(rel.anchor);
        if (anchor_idx && pending.count(*anchor_idx) != 0 && *anchor_idx != *it) {
          ++it;
          continue;
        }
        place(*declaration_for(*it), rel, avoids[*it]);
        it = pending.erase(it);
        progress = true;
      }
    }
    for (std::size_t idx : pending) {
      Declaration& decl = *declaration_for(idx);
      fail_in_planning("plan:" + objects_[idx].name + ":place", "PlaceLayout",
                       Error(ErrorCode::UnresolvedReference, "cyclic placement relations"));
      place_at_center(decl);
    }
  }

  void place(Declaration& decl, SpatialRelation rel, const std::vector<SpatialRelation>& avoid) {
    const ObjectPlan& o = objects_[decl.object_index];
    const std::string id = "plan:" + o.name + ":place";
    try {
      if (rel.anchor == o.name) throw Error(ErrorCode::UnknownAnchor, o.name + " cannot be anchored to itself");
      const PluginDescriptor& rd = relation_descriptor(rel.kind);
      if (rd.param("count") != nullptr && rel.params.count("count") == 0) rel.params["count"] = o.count;
      const ValidationResult v = validate_params(rd, rel.params);
      if (!v.ok()) {
        throw Error(ErrorCode::InvalidParams, "relation parameter '" + v.violations.front().param +
                                                  "': " + v.violations.front().reason);
      }
      const SceneGraph scene = preview();
      RelationContext ctx;
      ctx.seed = derive_seed(options_.seed, kLayoutStream + decl.object_index);
      for (const SpatialRelation& a : avoid) {
        if (rel.kind == RelationKind::Avoid && a.anchor == rel.anchor) continue;  // resolve_relation adds it
        for (Region& r : relation_exclusions(a, scene)) ctx.exclusions.push_back(std::move(r));
      }
      const ResolvedRelation resolved = resolve_relation(rel, scene, ctx);
      const std::string layout_id = next_action_id();
      set_layout_ref(decl, layout_id);
      const std::string object_ref = action_id(plan_.actions[decl.action_index]);
      plan_.actions.push_back(PlaceLayoutAction{layout_id, object_ref, resolved.spec, resolved.project_to_terrain});
      report_.log.push_back("place " + o.name + ": " + std::string(relation_kind_name(rel.kind)) + " " + rel.anchor +
                            " -> " + std::string(layout_kind_name(resolved.spec.kind())));
    } catch (const Error& e) {
      fail_in_planning(id, "PlaceLayout", e);
      place_at_center(decl);
    }
  }

  PipelineResult paused() {
    PipelineResult result;
    result.clarification = clarification_;
    result.objects = objects_;
    result.plan = plan_;
    result.scene = base_ ? *base_ : SceneGraph(options_.seed);
    result.report = report_;
    result.report.log.push_back("paused: waiting for " + std::to_string(clarification_->fields.size()) +
                                " clarification answer(s)");
    return result;
  }

  std::string_view query_;
  const PipelineDeps& deps_;
  const PipelineOptions& options_;
  const std::optional<SceneGraph>& base_;

  std::vector<ObjectPlan> objects_;
  std::vector<SpatialRelation> relations_;
  std::optional<std::size_t> terrain_object_;
  std::vector<Declaration> declarations_;
  std::optional<ClarificationRequest> clarification_;
  std::vector<ActionOutcome> planning_failures_;
  ActionPlan plan_;
  RunReport report_;
};

}  // namespace

json clarification_to_json(const ClarificationRequest& c) {
  return {{"fields", c.fields}, {"questions", c.questions}};
}

TerrainParams terrain_params_from_values(const ParamValues& values, std::uint64_t seed) {
  TerrainParams p;
  p.seed = seed;
  auto num = [&](const char* key, double fallback) {
    auto it = values.find(key);
    return it != values.end() && it->second.is_number() ? it->second.get<double>() : fallback;
  };
  p.size_x = p.size_y = num("size", p.size_x);
  p.resolution = static_cast<std::size_t>(num("resolution", static_cast<double>(p.resolution)));
  p.base_elevation = num("base_elevation", p.base_elevation);
  p.elevation_range = num("elevation_range", p.elevation_range);
  p.slope = num("slope", p.slope);
  p.slope_direction = num("slope_direction", p.slope_direction);
  p.roughness = num("roughness", p.roughness);
  p.octaves = static_cast<std::uint32_t>(num("octaves", p.octaves));

  const auto valley = values.find("valley");
  if (valley != values.end() && valley->second.is_string() && valley->second != "none") {
    const std::string kind = valley->second.get<std::string>();
    Valley v;
    v.depth = num("valley_depth", 5.0);
    v.width = num("valley_width", 20.0);
    if (kind == "x_axis") v.path = {{0.0, 0.5 * p.size_y}, {p.size_x, 0.5 * p.size_y}};
    else if (kind == "y_axis") v.path = {{0.5 * p.size_x, 0.0}, {0.5 * p.size_x, p.size_y}};
    else v.path = {{0.0, 0.0}, {p.size_x, p.size_y}};
    p.valley = std::move(v);
  }
  return p;
}

PipelineResult run_pipeline(std::string_view query, const PipelineDeps& deps, const PipelineOptions& options,
                            const std::optional<SceneGraph>& base) {
  return Planner(query, deps, options, base).run();
}

}  // namespace scenesmith
