#pragma once

#include <vector>

#include "scenesmith/scene/geometry.hpp"

namespace scenesmith {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Rect2 {
  Point2 min;
  Point2 max;
  friend bool operator==(const Rect2&, const Rect2&) = default;
};

/// Planar placement domain in world XY. All containment tests are boundary-inclusive.
class Region {
 public:
  enum class Kind { Rectangle, Polygon, Disc };

  static Region rectangle(Point2 min, Point2 max);
  static Region polygon(std::vector<Point2> vertices);
  /// A disc, or an annulus when inner_radius > 0.
  static Region disc(Point2 center, double radius, double inner_radius = 0.0);

  Kind kind() const { return kind_; }
  const Rect2& rect() const { return rect_; }
  const std::vector<Point2>& vertices() const { return vertices_; }
  Point2 center() const;
  double radius() const { return radius_; }
  double inner_radius() const { return inner_radius_; }

  /// Throws InvalidRegion: non-finite values, zero area, or a self-intersecting polygon.
  void validate() const;

  bool contains(Point2 p, double tol = 0.0) const;
  bool contains_rect(const Rect2& r, double tol = 1e-9) const;
  /// Conservative region-in-region test: every boundary sample of `inner` lies inside this
  /// region and no polygon vertex of this region lies strictly inside `inner`.
  bool contains_region(const Region& inner, double tol = 1e-9) const;

  Rect2 bounds() const;
  double area() const;
  /// Boundary points (rect corners, polygon vertices, 72 points per disc circle).
  std::vector<Point2> boundary_samples() const;

  friend bool operator==(const Region&, const Region&) = default;

 private:
  Kind kind_ = Kind::Rectangle;
  Rect2 rect_{};
  std::vector<Point2> vertices_;
  Point2 center_{};
  double radius_ = 0.0;
  double inner_radius_ = 0.0;
};

/// Distance from p to segment ab.
double point_segment_distance(Point2 p, Point2 a, Point2 b);

}  // namespace scenesmith
