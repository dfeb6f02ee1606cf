#include "scenesmith/scene/geometry.hpp"

#include <algorithm>
#include <numbers>

#include "scenesmith/core/error.hpp"

namespace scenesmith {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

}  // namespace

void Transform::validate() const {
  if (!position.finite() || !rotation.finite() || !scale.finite()) {
    throw Error(ErrorCode::InvalidArgument, "transform has non-finite components");
  }
  if (scale.x <= 0.0 || scale.y <= 0.0 || scale.z <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "transform scale must be positive");
  }
  for (double r : {rotation.x, rotation.y, rotation.z}) {
    if (r < -360.0 || r > 360.0) {
      throw Error(ErrorCode::InvalidArgument, "transform rotation outside [-360, 360]");
    }
  }
}

Aabb compute_aabb(std::span<const Vec3> points) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "compute_aabb needs at least one point");
  Aabb box{points.front(), points.front()};
  for (const Vec3& p : points.subspan(1)) {
    box.min = {std::min(box.min.x, p.x), std::min(box.min.y, p.y), std::min(box.min.z, p.z)};
    box.max = {std::max(box.max.x, p.x), std::max(box.max.y, p.y), std::max(box.max.z, p.z)};
  }
  return box;
}

Aabb instance_footprint(const Transform& t) {
  const Vec3 half{0.5 * t.scale.x, 0.5 * t.scale.y, 0.0};
  return {{t.position.x - half.x, t.position.y - half.y, t.position.z},
          {t.position.x + half.x, t.position.y + half.y, t.position.z + t.scale.z}};
}

FramingCamera compute_framing_camera(const Aabb& aabb, double vertical_fov_deg, double margin,
                                     const Vec3& view_dir) {
  if (!(vertical_fov_deg > 0.0 && vertical_fov_deg < 180.0)) {
    throw Error(ErrorCode::InvalidArgument, "vertical fov must be in (0, 180) degrees");
  }
  if (!(margin >= 1.0)) throw Error(ErrorCode::InvalidArgument, "framing margin must be >= 1");
  const double len = view_dir.norm();
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw Error(ErrorCode::InvalidArgument, "view direction must be non-zero");
  }

  FramingCamera cam;
  cam.target = aabb.center();
  cam.radius = aabb.sphere_radius();
  if (cam.radius <= 0.0) {
    cam.radius = kDegenerateRadius;
    cam.degenerate = true;
  }
  cam.distance = margin * cam.radius / std::sin(0.5 * vertical_fov_deg * kDegToRad);

  const Vec3 dir = view_dir * (1.0 / len);
  cam.transform.position = cam.target - dir * cam.distance;
  // Local -Z onto dir with zero roll: R = Rz(yaw) * Rx(pitch).
  const double pitch = std::acos(std::clamp(-dir.z, -1.0, 1.0));
  const double yaw = std::atan2(-dir.x, dir.y);
  cam.transform.rotation = {pitch * kRadToDeg, 0.0, yaw * kRadToDeg};
  return cam;
}

void euler_xyz_to_matrix(const Vec3& euler_deg, double m[9]) {
  const double cx = std::cos(euler_deg.x * kDegToRad), sx = std::sin(euler_deg.x * kDegToRad);
  const double cy = std::cos(euler_deg.y * kDegToRad), sy = std::sin(euler_deg.y * kDegToRad);
  const double cz = std::cos(euler_deg.z * kDegToRad), sz = std::sin(euler_deg.z * kDegToRad);
  m[0] = cz * cy;
  m[1] = cz * sy * sx - sz * cx;
  m[2] = cz * sy * cx + sz * sx;
  m[3] = sz * cy;
  m[4] = sz * sy * sx + cz * cx;
  m[5] = sz * sy * cx - cz * sx;
  m[6] = -sy;
  m[7] = cy * sx;
  m[8] = cy * cx;
}

}  // namespace scenesmith
