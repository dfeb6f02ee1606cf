#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace scenesmith {

/// Regular grid of heights over [0, size_x] x [0, size_y]. Node (i, j) sits at
/// (i * cell_x(), j * cell_y()) and is stored row-major at heights[j * resolution + i].
struct Heightfield {
  std::size_t resolution = 0;
  double size_x = 0.0;
  double size_y = 0.0;
  std::vector<double> heights;
  std::set<std::string> tags;  // material tags, e.g. "snow", "rock"

  double cell_x() const { return size_x / static_cast<double>(resolution - 1); }
  double cell_y() const { return size_y / static_cast<double>(resolution - 1); }
  double at(std::size_t i, std::size_t j) const { return heights[j * resolution + i]; }
  double& at(std::size_t i, std::size_t j) { return heights[j * resolution + i]; }
  double node_x(std::size_t i) const { return static_cast<double>(i) * cell_x(); }
  double node_y(std::size_t j) const { return static_cast<double>(j) * cell_y(); }

  friend bool operator==(const Heightfield&, const Heightfield&) = default;
};

}  // namespace scenesmith
