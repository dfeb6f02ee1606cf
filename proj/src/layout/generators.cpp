#include "scenesmith/layout/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scenesmith/core/error.hpp"
#include "scenesmith/core/rng.hpp"
#include "scenesmith/simd/kernels.hpp"
#include "scenesmith/terrain/terrain.hpp"

namespace scenesmith {
namespace {

constexpr double kMergeTolerance = 1e-9;

double rad_to_deg(double r) { return r * 180.0 / std::numbers::pi; }

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::InvalidSpec, message);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

PlacedItem item_at(double x, double y, double yaw_deg) {
  PlacedItem item;
  item.transform.position = {x, y, 0.0};
  item.transform.rotation = {0.0, 0.0, yaw_deg};
  return item;
}

/// Polyline with near-coincident vertices merged and cumulative arc lengths.
struct Polyline {
  std::vector<Point2> pts;
  std::vector<double> cum;

  double length() const { return cum.back(); }
};

Polyline prepare_path(const std::vector<Point2>& path) {
  Polyline pl;
  for (const Point2& p : path) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error(ErrorCode::DegeneratePath, "non-finite path vertex");
    if (!pl.pts.empty() && std::hypot(p.x - pl.pts.back().x, p.y - pl.pts.back().y) < kMergeTolerance) continue;
    pl.pts.push_back(p);
  }
  if (pl.pts.size() < 2) throw Error(ErrorCode::DegeneratePath, "path has zero length");
  pl.cum.push_back(0.0);
  for (std::size_t i = 1; i < pl.pts.size(); ++i) {
    pl.cum.push_back(pl.cum.back() + std::hypot(pl.pts[i].x - pl.pts[i - 1].x, pl.pts[i].y - pl.pts[i - 1].y));
  }
  return pl;
}

void validate_linear(const LinearSpec& s) {
  require(std::isfinite(s.lateral_offset), "linear lateral_offset must be finite");
  if (s.circle) {
    require(positive(s.circle->radius), "circle radius must be > 0");
    require(std::isfinite(s.circle->center.x) && std::isfinite(s.circle->center.y), "circle center must be finite");
    return;
  }
  require(positive(s.spacing), "linear spacing must be > 0");
  prepare_path(s.path);
}

void validate_at_depth(const LayoutSpec& spec, int depth);

void validate_nested(const NestedSpec& s, int depth) {
  if (depth > kMaxNestingDepth) {
    throw Error(ErrorCode::InvalidSpec, "nested layouts deeper than " + std::to_string(kMaxNestingDepth));
  }
  s.parent.validate();
  for (std::size_t i = 0; i < s.children.size(); ++i) {
    validate_at_depth(s.children[i], depth + 1);
    if (!s.parent.contains_region(layout_target_region(s.children[i]))) {
      throw Error(ErrorCode::ChildRegionEscapesParent,
                  "child " + std::to_string(i) + " places outside the parent region");
    }
  }
}

void validate_at_depth(const LayoutSpec& spec, int depth) {
  std::visit(
      [depth](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ScatterSpec>) {
          s.region.validate();
          for (const Region& r : s.exclude) r.validate();
          require(positive(s.min_separation), "scatter min_separation must be > 0");
        } else if constexpr (std::is_same_v<T, GridSpec>) {
          require(s.rows >= 1 && s.cols >= 1, "grid rows and cols must be >= 1");
          require(positive(s.spacing), "grid spacing must be > 0");
          require(non_negative(s.jitter), "grid jitter must be >= 0");
          require(std::isfinite(s.origin.x) && std::isfinite(s.origin.y), "grid origin must be finite");
        } else if constexpr (std::is_same_v<T, LinearSpec>) {
          validate_linear(s);
        } else if constexpr (std::is_same_v<T, NestedSpec>) {
          validate_nested(s, depth);
        } else {
          s.region.validate();
          require(positive(s.footprint_x) && positive(s.footprint_y), "area_fill footprint must be > 0");
          require(non_negative(s.gap), "area_fill gap must be >= 0");
          require(std::isfinite(s.orientation) && std::fmod(s.orientation, 90.0) == 0.0,
                  "area_fill orientation must be a multiple of 90 degrees");
        }
      },
      spec.params);
}

Placement nested_at(const NestedSpec& spec, int depth);

Placement generate_at(const LayoutSpec& spec, int depth) {
  if (const auto* n = std::get_if<NestedSpec>(&spec.params)) return nested_at(*n, depth);
  return generate_layout(spec);
}

Placement nested_at(const NestedSpec& spec, int depth) {
  validate_nested(spec, depth);
  Placement out;
  out.kind = LayoutKind::Nested;
  for (std::size_t i = 0; i < spec.children.size(); ++i) {
    Placement child = generate_at(spec.children[i], depth + 1);
    out.saturated = out.saturated || child.saturated;
    out.footprint_too_large = out.footprint_too_large || child.footprint_too_large;
    for (PlacedItem& item : child.items) {
      item.group.insert(item.group.begin(), i);
      out.items.push_back(std::move(item));
    }
  }
  return out;
}

}  // namespace

void validate_layout_spec(const LayoutSpec& spec) { validate_at_depth(spec, 1); }

Region layout_target_region(const LayoutSpec& spec) {
  return std::visit(
      [](const auto& s) -> Region {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ScatterSpec>) {
          return s.region;
        } else if constexpr (std::is_same_v<T, GridSpec>) {
          const double w = static_cast<double>(s.cols - 1) * s.spacing;
          const double h = static_cast<double>(s.rows - 1) * s.spacing;
          return Region::rectangle({s.origin.x - s.jitter, s.origin.y - s.jitter},
                                   {s.origin.x + w + s.jitter, s.origin.y + h + s.jitter});
        } else if constexpr (std::is_same_v<T, LinearSpec>) {
          const double off = std::abs(s.lateral_offset);
          if (s.circle) return Region::disc(s.circle->center, s.circle->radius + off);
          Rect2 b{s.path.front(), s.path.front()};
          for (const Point2& p : s.path) {
            b.min = {std::min(b.min.x, p.x), std::min(b.min.y, p.y)};
            b.max = {std::max(b.max.x, p.x), std::max(b.max.y, p.y)};
          }
          return Region::rectangle({b.min.x - off, b.min.y - off}, {b.max.x + off, b.max.y + off});
        } else if constexpr (std::is_same_v<T, NestedSpec>) {
          return s.parent;
        } else {
          return s.region;
        }
      },
      spec.params);
}

Placement scatter(const ScatterSpec& spec) {
  validate_layout_spec({spec});
  Placement out;
  out.kind = LayoutKind::Scatter;
  out.seed = spec.seed;
  if (spec.count == 0) return out;

  const simd::KernelTable& k = simd::active_kernels();
  const Rect2 b = spec.region.bounds();
  const double r2 = spec.min_separation * spec.min_separation;
  std::vector<double> xs, ys;
  xs.reserve(spec.count);
  ys.reserve(spec.count);

  Rng rng(spec.seed);
  const std::size_t budget = kScatterAttemptsPerPoint * spec.count;
  for (std::size_t attempt = 0; attempt < budget && xs.size() < spec.count; ++attempt) {
    const Point2 p{rng.uniform(b.min.x, b.max.x), rng.uniform(b.min.y, b.max.y)};
    if (!spec.region.contains(p)) continue;
    bool excluded = false;
    for (const Region& ex : spec.exclude) {
      if (ex.contains(p)) {
        excluded = true;
        break;
      }
    }
    if (excluded || k.any_within(xs.data(), ys.data(), xs.size(), p.x, p.y, r2)) continue;
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  out.saturated = xs.size() < spec.count;

  // Yaws come from a separate stream so they do not perturb the positions.
  Rng yaw_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out.items.push_back(item_at(xs[i], ys[i], yaw_rng.uniform(0.0, 360.0)));
  }
  return out;
}

Placement grid(const GridSpec& spec) {
  validate_layout_spec({spec});
  Placement out;
  out.kind = LayoutKind::Grid;
  out.seed = spec.seed;
  Rng rng(spec.seed);
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      double x = spec.origin.x + static_cast<double>(c) * spec.spacing;
      double y = spec.origin.y + static_cast<double>(r) * spec.spacing;
      if (spec.jitter > 0.0) {
        x += rng.uniform(-spec.jitter, spec.jitter);
        y += rng.uniform(-spec.jitter, spec.jitter);
      }
      out.items.push_back(item_at(x, y, 0.0));
    }
  }
  return out;
}

Placement linear(const LinearSpec& spec) {
  validate_layout_spec({spec});
  Placement out;
  out.kind = LayoutKind::Linear;

  if (spec.circle) {
    const CirclePath& c = *spec.circle;
    // Counter-clockwise walk: the left normal points at the center.
    const double r = c.radius - spec.lateral_offset;
    for (std::size_t i = 0; i < c.count; ++i) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(c.count);
      const double yaw = spec.align_to_tangent ? std::fmod(rad_to_deg(a) + 90.0, 360.0) : 0.0;
      out.items.push_back(item_at(c.center.x + r * std::cos(a), c.center.y + r * std::sin(a), yaw));
    }
    return out;
  }

  const Polyline pl = prepare_path(spec.path);
  const double length = pl.length();
  const auto count = static_cast<std::size_t>(std::floor(length / spec.spacing + kMergeTolerance)) + 1;
  std::size_t seg = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double s = std::min(static_cast<double>(i) * spec.spacing, length);
    while (seg + 2 < pl.pts.size() && s >= pl.cum[seg + 1]) ++seg;
    const Point2 a = pl.pts[seg], b = pl.pts[seg + 1];
    const double seg_len = pl.cum[seg + 1] - pl.cum[seg];
    const double tx = (b.x - a.x) / seg_len, ty = (b.y - a.y) / seg_len;
    const double u = s - pl.cum[seg];
    const double x = a.x + u * tx - spec.lateral_offset * ty;
    const double y = a.y + u * ty + spec.lateral_offset * tx;
    out.items.push_back(item_at(x, y, spec.align_to_tangent ? rad_to_deg(std::atan2(ty, tx)) : 0.0));
  }
  return out;
}

Placement nested(const NestedSpec& spec) { return nested_at(spec, 1); }

Placement area_fill(const AreaFillSpec& spec) {
  validate_layout_spec({spec});
  Placement out;
  out.kind = LayoutKind::AreaFill;

  const bool quarter_turn = std::fmod(std::abs(spec.orientation), 180.0) == 90.0;
  const double fx = quarter_turn ? spec.footprint_y : spec.footprint_x;
  const double fy = quarter_turn ? spec.footprint_x : spec.footprint_y;
  const Rect2 b = spec.region.bounds();
  if (fx > b.max.x - b.min.x || fy > b.max.y - b.min.y) {
    out.footprint_too_large = true;
    return out;
  }
  const double px = fx + spec.gap, py = fy + spec.gap;
  for (std::size_t j = 0;; ++j) {
    const double y0 = b.min.y + static_cast<double>(j) * py;
    if (y0 + fy > b.max.y + kMergeTolerance) break;
    for (std::size_t i = 0;; ++i) {
      const double x0 = b.min.x + static_cast<double>(i) * px;
      if (x0 + fx > b.max.x + kMergeTolerance) break;
      const Rect2 cell{{x0, y0}, {x0 + fx, y0 + fy}};
      if (!spec.region.contains_rect(cell)) continue;
      PlacedItem item = item_at(x0 + 0.5 * fx, y0 + 0.5 * fy, spec.orientation);
      item.footprint = cell;
      out.items.push_back(std::move(item));
    }
  }
  return out;
}

Placement generate_layout(const LayoutSpec& spec) {
  return std::visit(
      [](const auto& s) -> Placement {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ScatterSpec>) return scatter(s);
        else if constexpr (std::is_same_v<T, GridSpec>) return grid(s);
        else if constexpr (std::is_same_v<T, LinearSpec>) return linear(s);
        else if constexpr (std::is_same_v<T, NestedSpec>) return nested(s);
        else return area_fill(s);
      },
      spec.params);
}

Placement project_to_terrain(Placement placement, const Heightfield& hf) {
  std::vector<PlacedItem> kept;
  kept.reserve(placement.items.size());
  for (PlacedItem& item : placement.items) {
    Vec3& p = item.transform.position;
    try {
      p.z = sample_height(hf, p.x, p.y);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OutOfBounds) throw;
      ++placement.dropped;
      placement.out_of_bounds = true;
      continue;
    }
    kept.push_back(std::move(item));
  }
  placement.items = std::move(kept);
  return placement;
}

}  // namespace scenesmith
