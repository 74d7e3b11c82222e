#pragma once

#include "layout/ingest.hpp"
#include "layout/model.hpp"

#include <vector>

namespace layout {

/// Wall observations used to decide whether two selected rectangles that
/// share an edge describe the same space. Walls have zero thickness here,
/// so rectangles on either side of a wall touch on the raster.
struct WallEvidence {
  std::vector<ProjectedSegment> segments;
  std::vector<Doorway> doorways;
  std::vector<LayoutPlane> planes;
  double tolerance = 0.1;
};

/// Groups the selected rectangles into disjoint regions. Rectangles sharing
/// a cell always merge; rectangles sharing an edge merge unless `evidence`
/// holds wall points or a doorway on that edge. Each region's boundary is
/// traced on cell corners, counter-clockwise, with collinear vertices removed.
std::vector<Region> union_to_regions(const std::vector<CandidateRect>& selected, const OccupancyGrid2D& grid,
                                     const WallEvidence* evidence = nullptr);

/// Outer boundary and holes of a set of cells. Outer loop is CCW, holes CW.
struct TracedBoundary {
  Polygon outer;
  std::vector<Polygon> holes;
};
TracedBoundary trace_boundary(const std::vector<int>& cells, const OccupancyGrid2D& grid);

struct RegionSplit {
  std::vector<Region> kept;
  std::vector<Region> rejected;
};

/// Keeps a region iff total cells <= max_ratio * free cells.
RegionSplit filter_regions(const std::vector<Region>& regions, double max_ratio = 1000.0);

struct TransitionResult {
  std::vector<Transition> transitions;
  std::vector<int> unattached;  ///< doorway ids
};

/// A region qualifies for a doorway when its boundary edges lying on the
/// doorway's plane overlap the doorway interval by at least half its width.
/// Two qualifying regions form a transition, one leads to the exterior.
TransitionResult attach_transitions(const std::vector<Region>& regions, const std::vector<Doorway>& doorways,
                                    const std::vector<LayoutPlane>& planes, double tolerance = 0.1);

}  // namespace layout
