#include "layout/candidates.hpp"

#include <algorithm>

namespace layout {

std::vector<CandidateRect> enumerate_rects(const std::vector<LayoutPlane>& planes) {
  const PlanePartition part = plane_partition(planes);
  std::vector<CandidateRect> out;
  out.reserve(part.x_pos.size() * part.x_neg.size() * part.y_pos.size() * part.y_neg.size());
  for (const auto& west : part.x_pos)
    for (const auto& east : part.x_neg)
      for (const auto& south : part.y_pos)
        for (const auto& north : part.y_neg) {
          CandidateRect r;
          r.x_lo_plane = west.id;
          r.x_hi_plane = east.id;
          r.y_lo_plane = south.id;
          r.y_hi_plane = north.id;
          r.bounds = Bounds{west.offset, east.offset, south.offset, north.offset};
          out.push_back(std::move(r));
        }
  return out;
}

bool segments_intrude(const Bounds& b, const std::vector<ProjectedSegment>& segments, double erosion) {
  const double x0 = b.xmin + erosion, x1 = b.xmax - erosion;
  const double y0 = b.ymin + erosion, y1 = b.ymax - erosion;
  for (const auto& seg : segments) {
    // A plane's points all share its offset across the plane, so one test
    // decides the normal direction and a binary search the in-plane one.
    const bool x_axis = seg.axis == Axis::X;
    const double across_lo = x_axis ? x0 : y0, across_hi = x_axis ? x1 : y1;
    const double along_lo = x_axis ? y0 : x0, along_hi = x_axis ? y1 : x1;
    if (!(seg.offset > across_lo && seg.offset < across_hi)) continue;
    auto it = std::upper_bound(seg.along.begin(), seg.along.end(), along_lo);
    if (it != seg.along.end() && *it < along_hi) return true;
  }
  return false;
}

bool doorways_intrude(const Bounds& b, const std::vector<Doorway>& doorways, const std::vector<LayoutPlane>& planes,
                      double erosion) {
  const double x0 = b.xmin + erosion, x1 = b.xmax - erosion;
  const double y0 = b.ymin + erosion, y1 = b.ymax - erosion;
  for (const auto& d : doorways) {
    auto it = std::find_if(planes.begin(), planes.end(), [&](const LayoutPlane& p) { return p.id == d.plane_id; });
    if (it == planes.end()) continue;
    const bool x_axis = it->axis == Axis::X;
    const double across_lo = x_axis ? x0 : y0, across_hi = x_axis ? x1 : y1;
    const double along_lo = x_axis ? y0 : x0, along_hi = x_axis ? y1 : x1;
    if (it->offset > across_lo && it->offset < across_hi && d.lo() < along_hi && d.hi() > along_lo) return true;
  }
  return false;
}

std::vector<CandidateRect> prune_rects(const std::vector<CandidateRect>& candidates,
                                       const std::vector<ProjectedSegment>& segments,
                                       const std::vector<Doorway>& doorways, const std::vector<LayoutPlane>& planes,
                                       const OccupancyGrid2D& grid, const PruneParams& params, PruneStats* stats) {
  PruneStats local;
  local.enumerated = candidates.size();
  std::vector<CandidateRect> out;
  constexpr double kSlack = 1e-9;
  for (const auto& c : candidates) {
    if (c.bounds.width() < params.min_dim - kSlack || c.bounds.height() < params.min_dim - kSlack) {
      ++local.too_narrow;
      continue;
    }
    if (segments_intrude(c.bounds, segments, params.erosion)) {
      ++local.segment_collision;
      continue;
    }
    if (doorways_intrude(c.bounds, doorways, planes, params.erosion)) {
      ++local.doorway_collision;
      continue;
    }
    CandidateRect r = c;
    r.cells = grid.rasterize(c.bounds);
    r.weight = r.cells.count();
    r.covered_free.clear();
    for (int j = r.cells.j0; j < r.cells.j1; ++j)
      for (int i = r.cells.i0; i < r.cells.i1; ++i)
        if (grid.at(i, j) == CellState::Free) r.covered_free.push_back(grid.index(i, j));
    if (r.covered_free.empty()) {
      ++local.no_free_cells;
      continue;
    }
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(),
            [](const CandidateRect& a, const CandidateRect& b) { return a.plane_key() < b.plane_key(); });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = int(i);
  local.survivors = out.size();
  if (stats) *stats = local;
  return out;
}

}  // namespace layout
