#pragma once

#include <cmath>
#include <span>

namespace scenesmith {

/// Right-handed, Z-up, meters.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

/// Rotation is Euler XYZ in degrees (the DCC convention, applied verbatim by the adapter).
struct Transform {
  Vec3 position;
  Vec3 rotation;
  Vec3 scale{1.0, 1.0, 1.0};

  friend bool operator==(const Transform&, const Transform&) = default;

  /// Throws InvalidArgument on non-finite fields, non-positive scale, or rotation outside
  /// [-360, 360].
  void validate() const;
};

struct Aabb {
  Vec3 min;
  Vec3 max;

  friend bool operator==(const Aabb&, const Aabb&) = default;

  Vec3 center() const { return (min + max) * 0.5; }
  Vec3 extent() const { return max - min; }
  /// Radius of the bounding sphere centred on center().
  double sphere_radius() const { return extent().norm() * 0.5; }
};

/// Componentwise extrema. Throws EmptyInput for an empty span.
Aabb compute_aabb(std::span<const Vec3> points);

/// Footprint of a unit box proxy placed at the transform (axis-aligned, base at position.z).
Aabb instance_footprint(const Transform& t);

struct FramingCamera {
  Transform transform;   // camera pose; looks down its local -Z with +Y up
  Vec3 target;           // AABB center
  double distance = 0.0;
  double radius = 0.0;   // bounding-sphere radius used for the fit
  bool degenerate = false;
};

/// Radius used when the AABB has zero extent.
inline constexpr double kDegenerateRadius = 1e-3;

/// Places the camera at distance margin * r / sin(fov / 2) from the AABB center along
/// -view_dir, where r is the bounding-sphere radius. A zero-extent box falls back to
/// kDegenerateRadius and sets `degenerate`. Throws InvalidArgument for fov outside (0, 180),
/// margin < 1, or a zero view direction.
FramingCamera compute_framing_camera(const Aabb& aabb, double vertical_fov_deg, double margin,
                                     const Vec3& view_dir);

/// Rotation matrix (row-major 3x3) for Euler XYZ degrees, R = Rz * Ry * Rx.
void euler_xyz_to_matrix(const Vec3& euler_deg, double out[9]);

}  // namespace scenesmith
