#pragma once

#include <cstdint>
#include <vector>

#include "scenesmith/layout/layout_spec.hpp"
#include "scenesmith/scene/geometry.hpp"
#include "scenesmith/terrain/heightfield.hpp"

namespace scenesmith {

/// Maximum nesting of `nested` specs (a nested spec at depth 3 may not contain another).
inline constexpr int kMaxNestingDepth = 3;

/// Scatter gives up after this many darts per requested point.
inline constexpr std::size_t kScatterAttemptsPerPoint = 30;

struct PlacedItem {
  Transform transform;
  /// Child indices from the outermost nested spec inwards; empty outside nested layouts.
  std::vector<std::size_t> group;
  /// Occupied rectangle for area_fill items.
  std::optional<Rect2> footprint;

  friend bool operator==(const PlacedItem&, const PlacedItem&) = default;
};

struct Placement {
  LayoutKind kind = LayoutKind::Scatter;
  std::uint64_t seed = 0;
  std::vector<PlacedItem> items;
  bool saturated = false;            // scatter could not reach its count
  bool footprint_too_large = false;  // area_fill footprint exceeds the region
  bool out_of_bounds = false;        // projection dropped points outside the terrain
  std::size_t dropped = 0;

  friend bool operator==(const Placement&, const Placement&) = default;
};

/// Throws InvalidSpec for bad counts/spacings, InvalidRegion for bad regions,
/// DegeneratePath for zero-length paths, ChildRegionEscapesParent for nested specs.
void validate_layout_spec(const LayoutSpec& spec);

Placement scatter(const ScatterSpec& spec);
Placement grid(const GridSpec& spec);
Placement linear(const LinearSpec& spec);
Placement nested(const NestedSpec& spec);
Placement area_fill(const AreaFillSpec& spec);

/// Dispatches on the spec kind.
Placement generate_layout(const LayoutSpec& spec);

/// The planar domain a spec places into; used for nested containment checks.
Region layout_target_region(const LayoutSpec& spec);

/// Sets z from the heightfield; points off the terrain are dropped and counted.
Placement project_to_terrain(Placement placement, const Heightfield& hf);

}  // namespace scenesmith
