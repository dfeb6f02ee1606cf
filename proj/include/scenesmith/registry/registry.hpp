#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scenesmith/registry/param_spec.hpp"
#include "scenesmith/retrieval/embedding.hpp"

namespace scenesmith {

class Embedder;

inline constexpr std::string_view kPluginSchema = "plugin/1";

/// Closed capability vocabulary of the plugin hub.
const std::vector<std::string>& capability_vocabulary();
bool is_known_capability(std::string_view capability);

struct PluginDescriptor {
  std::string name;
  std::string capability;
  std::string description;
  std::vector<ParamSpec> params;
  std::vector<std::string> constraints;  // advisory, not machine-checked

  const ParamSpec* param(std::string_view name) const;

  friend bool operator==(const PluginDescriptor&, const PluginDescriptor&) = default;
};

struct AssetRecord {
  std::string id;
  std::string name;
  std::string category;
  std::vector<std::string> tags;
  Embedding embedding;
  std::optional<std::string> preview_path;

  /// Text the mock pipeline embeds when no precomputed vector is supplied.
  std::string embedding_text() const;

  friend bool operator==(const AssetRecord&, const AssetRecord&) = default;
};

/// Immutable after load; freely shareable.
class Registry {
 public:
  /// Throws DuplicateName.
  void add_descriptor(PluginDescriptor d);
  void add_asset(AssetRecord a);

  const PluginDescriptor* descriptor(std::string_view name) const;
  const AssetRecord* asset(std::string_view id) const;

  const std::map<std::string, PluginDescriptor, std::less<>>& descriptors() const { return descriptors_; }
  const std::map<std::string, AssetRecord, std::less<>>& assets() const { return assets_; }

  friend bool operator==(const Registry&, const Registry&) = default;

 private:
  std::map<std::string, PluginDescriptor, std::less<>> descriptors_;
  std::map<std::string, AssetRecord, std::less<>> assets_;
};

/// Validates invariants and throws SchemaError(field): param names unique, numeric range
/// well-formed, default inside range/options, required params without default, known
/// capability.
void validate_descriptor(const PluginDescriptor& d);

PluginDescriptor descriptor_from_json(const nlohmann::json& j, const std::string& source);
nlohmann::json descriptor_to_json(const PluginDescriptor& d);
nlohmann::json param_spec_to_json(const ParamSpec& p);

/// Parses one descriptor-json document. Throws ParseError(path, line) or SchemaError.
PluginDescriptor parse_descriptor(std::string_view text, const std::string& source);

/// Loads every *.json file; file order does not matter. Throws DuplicateName.
Registry load_descriptors(const std::vector<std::filesystem::path>& files);
Registry load_descriptor_dir(const std::filesystem::path& dir);

/// Asset catalog: JSON lines with either "embedding" (float array) or "embedding_b64"
/// (little-endian float32). Entries without a vector are embedded from name + tags when an
/// embedder is given, otherwise rejected.
std::vector<AssetRecord> parse_asset_catalog(std::string_view text, const std::string& source,
                                             const Embedder* embedder);
std::string asset_to_jsonl(const AssetRecord& a);

/// Loads <dir>/plugins/*.json and, when present, <dir>/assets/catalog.jsonl.
Registry load_registry(const std::filesystem::path& dir, const Embedder* embedder);

struct ValidationResult {
  std::optional<ParamAssignment> assignment;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

/// Accepted iff every provided value type-checks and is in range/options. Never throws.
ValidationResult validate_params(const PluginDescriptor& spec, const ParamValues& values);

/// Unspecified params take their defaults. Required params without a default stay absent.
/// Throws InvalidParams if a provided value is invalid.
ParamAssignment fill_defaults(const PluginDescriptor& spec, const ParamValues& partial);

/// Required params (no default) absent from the values.
std::vector<std::string> missing_required(const PluginDescriptor& spec, const ParamValues& values);

}  // namespace scenesmith
