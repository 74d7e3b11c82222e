#include "layout/model.hpp"

#include "layout/error.hpp"

#include <algorithm>
#include <cmath>

namespace layout {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::HeightOutOfRange: return "HeightOutOfRange";
    case ErrorKind::UniverseNotCoverable: return "UniverseNotCoverable";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::DegeneratePolygon: return "DegeneratePolygon";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::PoseOutsideFreeSpace: return "PoseOutsideFreeSpace";
  }
  return "Unknown";
}

std::string to_string(Axis a) { return a == Axis::X ? "x" : "y"; }
std::string to_string(Facing f) { return f == Facing::Positive ? "+" : "-"; }
std::string to_string(RegionLabel l) {
  switch (l) {
    case RegionLabel::Room: return "room";
    case RegionLabel::Corridor: return "corridor";
    case RegionLabel::Unlabeled: break;
  }
  return "unlabeled";
}

void VoxelGrid::validate() const {
  if (!(resolution > 0.0) || !std::isfinite(resolution))
    throw Error(ErrorKind::InvariantViolation, "voxel resolution must be positive");
  for (int d : dims)
    if (d < 1) throw Error(ErrorKind::InvariantViolation, "voxel dims must all be >= 1");
  if (states.size() != size())
    throw Error(ErrorKind::InvariantViolation,
                "voxel state count " + std::to_string(states.size()) + " != nx*ny*nz " +
                    std::to_string(size()));
}

CellRange OccupancyGrid2D::rasterize(const Bounds& b) const {
  // A cell belongs to the box when its center is strictly inside.
  auto lo = [&](double v, double o, int n) {
    return std::clamp(int(std::floor((v - o) / resolution - 0.5)) + 1, 0, n);
  };
  auto hi = [&](double v, double o, int n) {
    return std::clamp(int(std::ceil((v - o) / resolution - 0.5)), 0, n);
  };
  CellRange r{lo(b.xmin, origin.x(), nx), hi(b.xmax, origin.x(), nx), lo(b.ymin, origin.y(), ny),
              hi(b.ymax, origin.y(), ny)};
  if (r.empty()) return CellRange{};
  return r;
}

Bounds OccupancyGrid2D::cell_bounds(const CellRange& r) const {
  return Bounds{origin.x() + r.i0 * resolution, origin.x() + r.i1 * resolution,
                origin.y() + r.j0 * resolution, origin.y() + r.j1 * resolution};
}

PlanePartition plane_partition(const std::vector<LayoutPlane>& planes) {
  PlanePartition out;
  for (const auto& p : planes) {
    if (p.axis == Axis::X)
      (p.facing == Facing::Positive ? out.x_pos : out.x_neg).push_back(p);
    else
      (p.facing == Facing::Positive ? out.y_pos : out.y_neg).push_back(p);
  }
  auto by_id = [](const LayoutPlane& a, const LayoutPlane& b) { return a.id < b.id; };
  for (auto* v : {&out.x_pos, &out.x_neg, &out.y_pos, &out.y_neg}) std::sort(v->begin(), v->end(), by_id);
  return out;
}

double signed_area(const Polygon& poly) {
  double a = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

double perimeter(const Polygon& poly) {
  double len = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) len += (poly[(i + 1) % n] - poly[i]).norm();
  return len;
}

Bounds bounding_box(const Polygon& poly) {
  if (poly.empty()) return {};
  Bounds b{poly[0].x(), poly[0].x(), poly[0].y(), poly[0].y()};
  for (const auto& p : poly) {
    b.xmin = std::min(b.xmin, p.x());
    b.xmax = std::max(b.xmax, p.x());
    b.ymin = std::min(b.ymin, p.y());
    b.ymax = std::max(b.ymax, p.y());
  }
  return b;
}

}  // namespace layout
