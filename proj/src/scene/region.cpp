#include "scenesmith/scene/region.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scenesmith/core/error.hpp"

namespace scenesmith {
namespace {

double cross(Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

bool on_segment(Point2 p, Point2 a, Point2 b, double tol) {
  return point_segment_distance(p, a, b) <= tol;
}

bool segments_properly_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  auto collinear_overlap = [](double o, Point2 p, Point2 q, Point2 r) {
    return o == 0.0 && std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
  };
  return collinear_overlap(d1, c, d, a) || collinear_overlap(d2, c, d, b) ||
         collinear_overlap(d3, a, b, c) || collinear_overlap(d4, a, b, d);
}

bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len2, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

Region Region::rectangle(Point2 min, Point2 max) {
  Region r;
  r.kind_ = Kind::Rectangle;
  r.rect_ = {min, max};
  return r;
}

Region Region::polygon(std::vector<Point2> vertices) {
  Region r;
  r.kind_ = Kind::Polygon;
  r.vertices_ = std::move(vertices);
  return r;
}

Region Region::disc(Point2 center, double radius, double inner_radius) {
  Region r;
  r.kind_ = Kind::Disc;
  r.center_ = center;
  r.radius_ = radius;
  r.inner_radius_ = inner_radius;
  return r;
}

Point2 Region::center() const {
  switch (kind_) {
    case Kind::Rectangle:
      return {0.5 * (rect_.min.x + rect_.max.x), 0.5 * (rect_.min.y + rect_.max.y)};
    case Kind::Disc:
      return center_;
    case Kind::Polygon: {
      // Area centroid.
      double a = 0.0, cx = 0.0, cy = 0.0;
      const std::size_t n = vertices_.size();
      for (std::size_t i = 0; i < n; ++i) {
        const Point2 p = vertices_[i], q = vertices_[(i + 1) % n];
        const double c = p.x * q.y - q.x * p.y;
        a += c;
        cx += (p.x + q.x) * c;
        cy += (p.y + q.y) * c;
      }
      if (a == 0.0) return vertices_.empty() ? Point2{} : vertices_.front();
      return {cx / (3.0 * a), cy / (3.0 * a)};
    }
  }
  return {};
}

void Region::validate() const {
  switch (kind_) {
    case Kind::Rectangle:
      if (!finite(rect_.min) || !finite(rect_.max)) throw Error(ErrorCode::InvalidRegion, "rectangle has non-finite bounds");
      if (!(rect_.max.x > rect_.min.x && rect_.max.y > rect_.min.y)) {
        throw Error(ErrorCode::InvalidRegion, "rectangle must have positive area");
      }
      return;
    case Kind::Disc:
      if (!finite(center_) || !std::isfinite(radius_) || !std::isfinite(inner_radius_)) {
        throw Error(ErrorCode::InvalidRegion, "disc has non-finite parameters");
      }
      if (!(radius_ > 0.0) || inner_radius_ < 0.0 || inner_radius_ >= radius_) {
        throw Error(ErrorCode::InvalidRegion, "disc needs 0 <= inner_radius < radius");
      }
      return;
    case Kind::Polygon: {
      const std::size_t n = vertices_.size();
      if (n < 3) throw Error(ErrorCode::InvalidRegion, "polygon needs at least 3 vertices");
      for (const Point2& p : vertices_) {
        if (!finite(p)) throw Error(ErrorCode::InvalidRegion, "polygon has non-finite vertices");
      }
      if (!(area() > 0.0)) throw Error(ErrorCode::InvalidRegion, "polygon must have positive area");
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
          if (adjacent) continue;
          if (segments_properly_intersect(vertices_[i], vertices_[(i + 1) % n], vertices_[j],
                                          vertices_[(j + 1) % n])) {
            throw Error(ErrorCode::InvalidRegion, "polygon is self-intersecting");
          }
        }
      }
      return;
    }
  }
}

bool Region::contains(Point2 p, double tol) const {
  switch (kind_) {
    case Kind::Rectangle:
      return p.x >= rect_.min.x - tol && p.x <= rect_.max.x + tol && p.y >= rect_.min.y - tol &&
             p.y <= rect_.max.y + tol;
    case Kind::Disc: {
      const double d = std::hypot(p.x - center_.x, p.y - center_.y);
      return d <= radius_ + tol && d >= inner_radius_ - tol;
    }
    case Kind::Polygon: {
      const std::size_t n = vertices_.size();
      for (std::size_t i = 0; i < n; ++i) {
        if (on_segment(p, vertices_[i], vertices_[(i + 1) % n], tol)) return true;
      }
      bool inside = false;
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2 a = vertices_[i], b = vertices_[j];
        if ((a.y > p.y) != (b.y > p.y)) {
          const double x = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
          if (p.x < x) inside = !inside;
        }
      }
      return inside;
    }
  }
  return false;
}

bool Region::contains_rect(const Rect2& r, double tol) const {
  return contains_region(Region::rectangle(r.min, r.max), tol);
}

bool Region::contains_region(const Region& inner, double tol) const {
  for (const Point2& p : inner.boundary_samples()) {
    if (!contains(p, tol)) return false;
  }
  if (inner.kind_ == Kind::Disc && inner.inner_radius_ == 0.0 && !contains(inner.center_, tol)) {
    return false;
  }
  // An annulus hole in this region must not overlap the inner region.
  if (kind_ == Kind::Disc && inner_radius_ > 0.0) {
    for (const Point2& p : inner.boundary_samples()) {
      if (std::hypot(p.x - center_.x, p.y - center_.y) < inner_radius_ - tol) return false;
    }
    if (inner.contains(center_, -tol)) return false;
  }
  if (kind_ == Kind::Polygon) {
    const Rect2 b = inner.bounds();
    for (const Point2& v : vertices_) {
      const bool strictly_inside_bounds =
          v.x > b.min.x + tol && v.x < b.max.x - tol && v.y > b.min.y + tol && v.y < b.max.y - tol;
      if (strictly_inside_bounds && inner.contains(v, -tol)) return false;
    }
  }
  return true;
}

Rect2 Region::bounds() const {
  switch (kind_) {
    case Kind::Rectangle:
      return rect_;
    case Kind::Disc:
      return {{center_.x - radius_, center_.y - radius_}, {center_.x + radius_, center_.y + radius_}};
    case Kind::Polygon: {
      Rect2 b{vertices_.front(), vertices_.front()};
      for (const Point2& p : vertices_) {
        b.min = {std::min(b.min.x, p.x), std::min(b.min.y, p.y)};
        b.max = {std::max(b.max.x, p.x), std::max(b.max.y, p.y)};
      }
      return b;
    }
  }
  return {};
}

double Region::area() const {
  switch (kind_) {
    case Kind::Rectangle:
      return (rect_.max.x - rect_.min.x) * (rect_.max.y - rect_.min.y);
    case Kind::Disc:
      return std::numbers::pi * (radius_ * radius_ - inner_radius_ * inner_radius_);
    case Kind::Polygon: {
      double a = 0.0;
      const std::size_t n = vertices_.size();
      for (std::size_t i = 0; i < n; ++i) {
        const Point2 p = vertices_[i], q = vertices_[(i + 1) % n];
        a += p.x * q.y - q.x * p.y;
      }
      return std::abs(0.5 * a);
    }
  }
  return 0.0;
}

std::vector<Point2> Region::boundary_samples() const {
  switch (kind_) {
    case Kind::Rectangle:
      return {rect_.min, {rect_.max.x, rect_.min.y}, rect_.max, {rect_.min.x, rect_.max.y}};
    case Kind::Polygon:
      return vertices_;
    case Kind::Disc: {
      std::vector<Point2> out;
      constexpr int kSamples = 72;
      for (double r : {radius_, inner_radius_}) {
        if (r <= 0.0) continue;
        for (int k = 0; k < kSamples; ++k) {
          const double a = 2.0 * std::numbers::pi * k / kSamples;
          out.push_back({center_.x + r * std::cos(a), center_.y + r * std::sin(a)});
        }
      }
      return out;
    }
  }
  return {};
}

}  // namespace scenesmith
