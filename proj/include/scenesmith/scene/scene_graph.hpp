#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "scenesmith/scene/geometry.hpp"
#include "scenesmith/scene/region.hpp"
#include "scenesmith/terrain/heightfield.hpp"

namespace scenesmith {

struct AssetInstance {
  std::string id;
  std::string asset_ref;  // asset id, or "plugin:<name>" for a procedural invocation
  Transform transform;
  std::set<std::string> tags;
  bool terrain_projected = false;

  friend bool operator==(const AssetInstance&, const AssetInstance&) = default;
};

/// The authoritative in-memory world. Single writer; callers serialize mutations.
class SceneGraph {
 public:
  SceneGraph() = default;
  explicit SceneGraph(std::uint64_t seed) : seed_(seed) {}

  /// Throws DuplicateId if the id is taken, InvalidArgument for a bad transform.
  void add_instance(AssetInstance inst);

  const std::vector<AssetInstance>& instances() const { return instances_; }
  const AssetInstance* find(const std::string& id) const;
  bool contains(const std::string& id) const { return index_.count(id) != 0; }
  std::size_t size() const { return instances_.size(); }

  /// Smallest "<prefix>_<n>" (n zero-padded to 4) not yet used.
  std::string next_id(const std::string& prefix) const;

  const std::optional<Heightfield>& terrain() const { return terrain_; }
  void set_terrain(Heightfield hf) { terrain_ = std::move(hf); }

  const std::map<std::string, Region>& regions() const { return regions_; }
  void set_region(const std::string& name, Region region);

  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  friend bool operator==(const SceneGraph& a, const SceneGraph& b) {
    return a.instances_ == b.instances_ && a.terrain_ == b.terrain_ && a.regions_ == b.regions_ &&
           a.seed_ == b.seed_ && a.metadata_ == b.metadata_;
  }

 private:
  std::vector<AssetInstance> instances_;
  std::unordered_map<std::string, std::size_t> index_;
  std::optional<Heightfield> terrain_;
  std::map<std::string, Region> regions_;
  std::uint64_t seed_ = 0;
  std::map<std::string, std::string> metadata_;
};

}  // namespace scenesmith
