#include "scenesmith/planner/agents.hpp"

#include <functional>
#include <optional>

#include "scenesmith/core/error.hpp"

namespace scenesmith {

using nlohmann::json;

namespace {

/// Parser result: empty string on success, otherwise the reason fed back to the model.
using Parser = std::function<std::string(const json&)>;

AgentLog run_agent(const std::string& stage, const std::string& system_prompt, const std::string& user_text,
                   LlmBackend& llm, const Parser& parse) {
  AgentLog log;
  log.stage = stage;
  std::vector<ChatMessage> messages{{Role::System, system_prompt}, {Role::User, user_text}};
  for (int attempt = 1; attempt <= kMaxAgentAttempts; ++attempt) {
    log.attempts = attempt;
    log.request_hashes.push_back(request_hash(llm.model(), llm.temperature(), messages));
    const std::string reply = llm.complete(messages);
    std::string error;
    try {
      error = parse(extract_json(reply));
    } catch (const Error& e) {
      error = e.what();
    } catch (const json::exception& e) {
      error = e.what();
    }
    if (error.empty()) return log;
    log.errors.push_back(error);
    messages.push_back({Role::Assistant, reply});
    messages.push_back({Role::User, "Your previous reply was rejected: " + error + "\nReply again with JSON only."});
  }
  std::vector<std::string> attempts;
  for (std::size_t i = 0; i < log.errors.size(); ++i) {
    attempts.push_back("attempt " + std::to_string(i + 1) + ": " + log.errors[i]);
  }
  throw PipelineError(stage, attempts,
                      stage + " failed after " + std::to_string(kMaxAgentAttempts) + " attempts: " + log.errors.back());
}

std::string object_user_text(const ObjectPlan& o) {
  std::string text = "Object: " + o.name + "\nCount: " + std::to_string(o.count) + "\nDescription: " + o.description;
  for (const auto& [module, request] : o.module_hints) text += "\nModule " + module + ": " + request;
  return text + "\n";
}

}  // namespace

PipelineError::PipelineError(std::string stage, std::vector<std::string> attempt_log, const std::string& message,
                             json partial_plan)
    : Error(ErrorCode::PipelineError, message),
      stage_(std::move(stage)),
      attempt_log_(std::move(attempt_log)),
      partial_plan_(std::move(partial_plan)) {}

json object_plan_to_json(const ObjectPlan& o) {
  json modules = json::object();
  for (const auto& [k, v] : o.module_hints) modules[k] = v;
  return {{"name", o.name}, {"count", o.count}, {"description", o.description}, {"modules", modules}};
}

json extract_json(std::string_view reply) {
  const auto open = reply.find('{');
  const auto close = reply.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw Error(ErrorCode::ParseError, "reply contains no JSON object");
  }
  try {
    return json::parse(reply.substr(open, close - open + 1));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("reply is not valid JSON: ") + e.what());
  }
}

DecomposeResult decompose(std::string_view query, LlmBackend& llm, const Registry& registry,
                          const PromptToggles& toggles) {
  if (query.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw Error(ErrorCode::InvalidArgument, "scene description is empty");
  }
  DecomposeResult result;
  const Parser parse = [&](const json& doc) -> std::string {
    if (!doc.is_object() || !doc.contains("objects") || !doc.at("objects").is_array()) {
      return "expected {\"objects\": [...]}";
    }
    std::vector<ObjectPlan> objects;
    for (const json& o : doc.at("objects")) {
      if (!o.is_object() || !o.contains("name") || !o.at("name").is_string() || o.at("name").get<std::string>().empty()) {
        return "every object needs a non-empty string \"name\"";
      }
      ObjectPlan plan;
      plan.name = o.at("name").get<std::string>();
      if (o.contains("count")) {
        if (!o.at("count").is_number_unsigned() || o.at("count").get<std::size_t>() < 1) {
          return "object '" + plan.name + "': \"count\" must be an integer >= 1";
        }
        plan.count = o.at("count").get<std::size_t>();
      }
      plan.description = o.value("description", plan.name);
      if (o.contains("modules")) {
        if (!o.at("modules").is_object()) return "object '" + plan.name + "': \"modules\" must be an object";
        for (const auto& [k, v] : o.at("modules").items()) {
          if (!v.is_string()) return "object '" + plan.name + "': module descriptions must be strings";
          plan.module_hints[k] = v.get<std::string>();
        }
      }
      for (const ObjectPlan& other : objects) {
        if (other.name == plan.name) return "duplicate object name '" + plan.name + "'";
      }
      objects.push_back(std::move(plan));
    }
    if (objects.empty()) return "the object list is empty";
    result.objects = std::move(objects);
    return {};
  };
  result.log = run_agent("decompose", build_prompt(decomposition_template(registry), toggles),
                         "Scene: " + std::string(query) + "\n", llm, parse);
  return result;
}

HyperparamResult generate_hyperparams(const PluginDescriptor& descriptor, const ObjectPlan& object, LlmBackend& llm,
                                      const PromptToggles& toggles) {
  HyperparamResult result;
  const Parser parse = [&](const json& doc) -> std::string {
    if (!doc.is_object() || !doc.contains("params") || !doc.at("params").is_object()) {
      return "expected {\"params\": {...}}";
    }
    ParamValues values;
    for (const auto& [k, v] : doc.at("params").items()) values[k] = v;
    const ValidationResult v = validate_params(descriptor, values);
    if (!v.ok()) {
      std::string reasons;
      for (const Violation& x : v.violations) reasons += (reasons.empty() ? "" : "; ") + x.param + ": " + x.reason;
      return reasons;
    }
    result.assignment = fill_defaults(descriptor, values);
    return {};
  };
  result.log = run_agent("hyperparams", build_prompt(hyperparam_template(descriptor), toggles), object_user_text(object),
                         llm, parse);
  return result;
}

RelationResult extract_relations(const std::vector<ObjectPlan>& objects, LlmBackend& llm,
                                 const PromptToggles& toggles) {
  if (objects.empty()) throw Error(ErrorCode::InvalidArgument, "relation extraction needs at least one object");
  RelationResult result;
  const Parser parse = [&](const json& doc) -> std::string {
    if (!doc.is_object() || !doc.contains("relations") || !doc.at("relations").is_array()) {
      return "expected {\"relations\": [...]}";
    }
    std::vector<SpatialRelation> relations;
    for (const json& r : doc.at("relations")) relations.push_back(relation_from_json(r));
    result.relations = std::move(relations);
    return {};
  };
  std::string text = "Objects:\n";
  for (const ObjectPlan& o : objects) {
    text += "- " + o.name + " (" + std::to_string(o.count) + "): " + o.description + "\n";
  }
  result.log = run_agent("relations", build_prompt(relation_template(), toggles), text, llm, parse);
  return result;
}

}  // namespace scenesmith
