#pragma once

#include "layout/ingest.hpp"
#include "layout/model.hpp"

#include <vector>

namespace layout {

/// Every pairing of an X+ with an X- plane and a Y+ with a Y- plane, in
/// plane-id 4-tuple order. Degenerate and outward-facing pairs are kept.
std::vector<CandidateRect> enumerate_rects(const std::vector<LayoutPlane>& planes);

struct PruneParams {
  double min_dim = 1.0;
  /// Erosion applied before segment and doorway collision tests; one cell.
  double erosion = 0.1;
};

struct PruneStats {
  std::size_t enumerated = 0;
  std::size_t too_narrow = 0;
  std::size_t segment_collision = 0;
  std::size_t doorway_collision = 0;
  std::size_t no_free_cells = 0;
  std::size_t survivors = 0;

  double reduction() const { return enumerated == 0 ? 0.0 : 1.0 - double(survivors) / double(enumerated); }
};

/// Keeps candidates that are at least `min_dim` on both sides, contain no
/// projected segment point or doorway interval in their eroded interior,
/// and cover at least one free cell. Survivors get weights, free-cell sets
/// and sequential ids.
std::vector<CandidateRect> prune_rects(const std::vector<CandidateRect>& candidates,
                                       const std::vector<ProjectedSegment>& segments,
                                       const std::vector<Doorway>& doorways, const std::vector<LayoutPlane>& planes,
                                       const OccupancyGrid2D& grid, const PruneParams& params = {},
                                       PruneStats* stats = nullptr);

/// True when some projected point lies strictly inside `b` shrunk by `erosion`.
bool segments_intrude(const Bounds& b, const std::vector<ProjectedSegment>& segments, double erosion);

/// True when some doorway's open interval meets the interior of `b` shrunk by `erosion`.
bool doorways_intrude(const Bounds& b, const std::vector<Doorway>& doorways, const std::vector<LayoutPlane>& planes,
                      double erosion);

}  // namespace layout
