#include "scenesmith/scene/scene_graph.hpp"

#include <cstdio>

#include "scenesmith/core/error.hpp"

namespace scenesmith {

void SceneGraph::add_instance(AssetInstance inst) {
  if (inst.id.empty()) throw Error(ErrorCode::InvalidArgument, "instance id must be non-empty");
  if (contains(inst.id)) throw Error(ErrorCode::DuplicateId, "duplicate instance id '" + inst.id + "'");
  inst.transform.validate();
  index_.emplace(inst.id, instances_.size());
  instances_.push_back(std::move(inst));
}

const AssetInstance* SceneGraph::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &instances_[it->second];
}

std::string SceneGraph::next_id(const std::string& prefix) const {
  for (std::size_t n = 0;; ++n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%04zu", n);
    std::string candidate = prefix + buf;
    if (!contains(candidate)) return candidate;
  }
}

void SceneGraph::set_region(const std::string& name, Region region) {
  region.validate();
  regions_.insert_or_assign(name, std::move(region));
}

}  // namespace scenesmith
