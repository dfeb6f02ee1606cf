#include "scenesmith/registry/registry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "scenesmith/core/base64.hpp"
#include "scenesmith/core/error.hpp"
#include "scenesmith/retrieval/embedder.hpp"
#include "scenesmith/scene/scene_io.hpp"

namespace scenesmith {

using nlohmann::json;

namespace {

std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

const json& field(const json& j, const char* key, const std::string& source) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(key, "missing in " + source);
  return j.at(key);
}

std::string string_field(const json& j, const char* key, const std::string& source) {
  const json& v = field(j, key, source);
  if (!v.is_string()) throw SchemaError(key, "expected a string in " + source);
  return v.get<std::string>();
}

}  // namespace

const std::vector<std::string>& capability_vocabulary() {
  static const std::vector<std::string> vocab = {
      "terrain",  "weather", "vegetation", "buildings", "blocks",         "cities",
      "people",   "water",   "snow",       "assets-placement", "materials", "dynamic-people",
      "dynamic-vegetation", "dynamic-vehicles"};
  return vocab;
}

bool is_known_capability(std::string_view capability) {
  const auto& v = capability_vocabulary();
  return std::find(v.begin(), v.end(), capability) != v.end();
}

const ParamSpec* PluginDescriptor::param(std::string_view n) const {
  for (const auto& p : params) {
    if (p.name == n) return &p;
  }
  return nullptr;
}

std::string AssetRecord::embedding_text() const {
  std::string text = name;
  for (const auto& t : tags) text += " " + t;
  return text;
}

void Registry::add_descriptor(PluginDescriptor d) {
  const std::string name = d.name;
  if (!descriptors_.emplace(name, std::move(d)).second) {
    throw Error(ErrorCode::DuplicateName, "plugin '" + name + "' registered twice");
  }
}

void Registry::add_asset(AssetRecord a) {
  const std::string id = a.id;
  if (!assets_.emplace(id, std::move(a)).second) {
    throw Error(ErrorCode::DuplicateName, "asset '" + id + "' registered twice");
  }
}

const PluginDescriptor* Registry::descriptor(std::string_view name) const {
  auto it = descriptors_.find(name);
  return it == descriptors_.end() ? nullptr : &it->second;
}

const AssetRecord* Registry::asset(std::string_view id) const {
  auto it = assets_.find(id);
  return it == assets_.end() ? nullptr : &it->second;
}

void validate_descriptor(const PluginDescriptor& d) {
  if (d.name.empty()) throw SchemaError("name", "plugin name must be non-empty");
  if (!is_known_capability(d.capability)) {
    throw SchemaError("capability", "unknown capability '" + d.capability + "' in plugin '" + d.name + "'");
  }
  std::set<std::string> seen;
  for (const ParamSpec& p : d.params) {
    if (p.name.empty()) throw SchemaError("name", "parameter name must be non-empty in '" + d.name + "'");
    if (!seen.insert(p.name).second) throw SchemaError("params", "duplicate parameter '" + p.name + "'");
    const bool numeric = p.kind == ParamKind::Float || p.kind == ParamKind::Int;
    if (numeric && !(std::isfinite(p.min) && std::isfinite(p.max) && p.min <= p.max)) {
      throw SchemaError("range", "parameter '" + p.name + "' needs a finite range with min <= max");
    }
    if (p.kind == ParamKind::Enum && p.options.empty()) {
      throw SchemaError("options", "enum parameter '" + p.name + "' has no options");
    }
    if (p.required && p.default_value) {
      throw SchemaError("default", "required parameter '" + p.name + "' must not carry a default");
    }
    if (!p.required && !p.default_value) {
      throw SchemaError("default", "parameter '" + p.name + "' needs a default or required: true");
    }
    if (p.default_value) {
      const CheckedValue c = check_param_value(p, *p.default_value);
      if (!c.value) throw SchemaError("default", "default of '" + p.name + "' is invalid: " + c.reason);
    }
  }
}

json param_spec_to_json(const ParamSpec& p) {
  json j = {{"name", p.name}, {"description", p.description}, {"kind", param_kind_name(p.kind)}};
  if (p.kind == ParamKind::Float || p.kind == ParamKind::Int) j["range"] = {p.min, p.max};
  if (p.kind == ParamKind::Enum) j["options"] = p.options;
  if (p.default_value) j["default"] = *p.default_value;
  if (p.unit) j["unit"] = *p.unit;
  if (p.required) j["required"] = true;
  return j;
}

json descriptor_to_json(const PluginDescriptor& d) {
  json params = json::array();
  for (const auto& p : d.params) params.push_back(param_spec_to_json(p));
  return {{"schema", kPluginSchema}, {"name", d.name},          {"capability", d.capability},
          {"description", d.description}, {"params", params}, {"constraints", d.constraints}};
}

PluginDescriptor descriptor_from_json(const json& j, const std::string& source) {
  const std::string schema = string_field(j, "schema", source);
  if (schema != kPluginSchema) throw SchemaError("schema", "expected '" + std::string(kPluginSchema) + "' in " + source);
  PluginDescriptor d;
  d.name = string_field(j, "name", source);
  d.capability = string_field(j, "capability", source);
  d.description = string_field(j, "description", source);
  const json& params = field(j, "params", source);
  if (!params.is_array()) throw SchemaError("params", "expected an array in " + source);
  for (const json& pj : params) {
    ParamSpec p;
    p.name = string_field(pj, "name", source);
    p.description = pj.contains("description") ? string_field(pj, "description", source) : std::string();
    const auto kind = parse_param_kind(string_field(pj, "kind", source));
    if (!kind) throw SchemaError("kind", "unknown parameter kind for '" + p.name + "' in " + source);
    p.kind = *kind;
    if (p.kind == ParamKind::Float || p.kind == ParamKind::Int) {
      const json& r = field(pj, "range", source);
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
        throw SchemaError("range", "expected [min, max] for '" + p.name + "' in " + source);
      }
      p.min = r[0].get<double>();
      p.max = r[1].get<double>();
    }
    if (p.kind == ParamKind::Enum) {
      const json& o = field(pj, "options", source);
      if (!o.is_array()) throw SchemaError("options", "expected a string list in " + source);
      for (const json& s : o) {
        if (!s.is_string()) throw SchemaError("options", "expected a string list in " + source);
        p.options.push_back(s.get<std::string>());
      }
    }
    if (pj.contains("default")) {
      const CheckedValue c = check_param_value(p, pj.at("default"));
      // Keep the raw value when invalid; validate_descriptor reports it.
      p.default_value = c.value ? *c.value : pj.at("default");
    }
    if (pj.contains("unit")) p.unit = string_field(pj, "unit", source);
    if (pj.contains("required")) {
      if (!pj.at("required").is_boolean()) throw SchemaError("required", "expected a boolean in " + source);
      p.required = pj.at("required").get<bool>();
    }
    d.params.push_back(std::move(p));
  }
  if (j.contains("constraints")) {
    for (const json& c : j.at("constraints")) {
      if (!c.is_string()) throw SchemaError("constraints", "expected strings in " + source);
      d.constraints.push_back(c.get<std::string>());
    }
  }
  validate_descriptor(d);
  return d;
}

PluginDescriptor parse_descriptor(std::string_view text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, line_of(text, e.byte), e.what());
  }
  return descriptor_from_json(j, source);
}

Registry load_descriptors(const std::vector<std::filesystem::path>& files) {
  std::vector<std::filesystem::path> sorted = files;
  std::sort(sorted.begin(), sorted.end());
  Registry reg;
  for (const auto& path : sorted) reg.add_descriptor(parse_descriptor(read_file(path), path.string()));
  return reg;
}

Registry load_descriptor_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::IoError, "cannot list '" + dir.string() + "': " + ec.message());
  return load_descriptors(files);
}

std::vector<AssetRecord> parse_asset_catalog(std::string_view text, const std::string& source,
                                             const Embedder* embedder) {
  std::vector<AssetRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, line_no, e.what());
    }
    const std::string where = source + ":" + std::to_string(line_no);
    AssetRecord a;
    a.id = string_field(j, "id", where);
    a.name = string_field(j, "name", where);
    a.category = string_field(j, "category", where);
    if (j.contains("tags")) a.tags = j.at("tags").get<std::vector<std::string>>();
    if (j.contains("preview_path")) a.preview_path = string_field(j, "preview_path", where);
    if (j.contains("embedding")) {
      a.embedding = Embedding::from_unit(j.at("embedding").get<std::vector<double>>());
    } else if (j.contains("embedding_b64")) {
      a.embedding = Embedding::from_unit(decode_f32_base64(string_field(j, "embedding_b64", where)));
    } else if (embedder != nullptr) {
      a.embedding = embedder->embed_text(a.embedding_text());
    } else {
      throw SchemaError("embedding", "asset '" + a.id + "' has no embedding in " + where);
    }
    out.push_back(std::move(a));
    if (end == text.size()) break;
  }
  return out;
}

std::string asset_to_jsonl(const AssetRecord& a) {
  json j = {{"id", a.id},
            {"name", a.name},
            {"category", a.category},
            {"tags", a.tags},
            {"embedding_b64", encode_f32_base64(a.embedding.values())}};
  if (a.preview_path) j["preview_path"] = *a.preview_path;
  return j.dump() + "\n";
}

Registry load_registry(const std::filesystem::path& dir, const Embedder* embedder) {
  Registry reg = load_descriptor_dir(dir / "plugins");
  const auto catalog = dir / "assets" / "catalog.jsonl";
  if (std::filesystem::exists(catalog)) {
    for (auto& a : parse_asset_catalog(read_file(catalog), catalog.string(), embedder)) reg.add_asset(std::move(a));
  }
  return reg;
}

ValidationResult validate_params(const PluginDescriptor& spec, const ParamValues& values) {
  ValidationResult result;
  ParamAssignment assignment{spec.name, {}};
  for (const auto& [name, value] : values) {
    const ParamSpec* p = spec.param(name);
    if (p == nullptr) {
      result.violations.push_back({name, "unknown parameter for plugin '" + spec.name + "'"});
      continue;
    }
    CheckedValue c = check_param_value(*p, value);
    if (!c.value) {
      result.violations.push_back({name, c.reason});
      continue;
    }
    assignment.values.emplace(name, std::move(*c.value));
  }
  if (result.violations.empty()) result.assignment = std::move(assignment);
  return result;
}

ParamAssignment fill_defaults(const PluginDescriptor& spec, const ParamValues& partial) {
  ValidationResult v = validate_params(spec, partial);
  if (!v.ok()) {
    throw Error(ErrorCode::InvalidParams,
                "parameter '" + v.violations.front().param + "': " + v.violations.front().reason);
  }
  ParamAssignment out = std::move(*v.assignment);
  for (const ParamSpec& p : spec.params) {
    if (!out.values.count(p.name) && p.default_value) out.values.emplace(p.name, *p.default_value);
  }
  return out;
}

std::vector<std::string> missing_required(const PluginDescriptor& spec, const ParamValues& values) {
  std::vector<std::string> out;
  for (const ParamSpec& p : spec.params) {
    if (p.required && !values.count(p.name)) out.push_back(p.name);
  }
  return out;
}

}  // namespace scenesmith
