#pragma once

// Domain types shared by every stage of the floor-plan pipeline.
//
// World frame: x grows east, y grows north, z up. A plane with axis X and
// positive facing has its normal along +x (east-facing); such a plane can
// only be the west wall of a region, so an inward-facing pair satisfies
// offset(X+) < offset(X-). The same holds for Y with south/north.

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace layout {

enum class Axis : std::uint8_t { X, Y };
enum class Facing : std::uint8_t { Positive, Negative };

/// Infinite axis-aligned vertical structural surface.
struct LayoutPlane {
  int id = 0;
  Axis axis = Axis::X;
  Facing facing = Facing::Positive;
  double offset = 0.0;  ///< signed coordinate along `axis`, meters

  friend bool operator==(const LayoutPlane&, const LayoutPlane&) = default;
};

/// Coordinate of a world point along the plane's in-plane horizontal axis
/// (y for X planes, x for Y planes).
inline double along_plane(Axis axis, const Eigen::Vector3d& p) { return axis == Axis::X ? p.y() : p.x(); }
/// Coordinate of a world point along the plane normal.
inline double across_plane(Axis axis, const Eigen::Vector3d& p) { return axis == Axis::X ? p.x() : p.y(); }

/// Observed points of one layout plane. `times` is either empty or holds
/// the first-observation timestamp of each point.
struct SegmentCloud {
  int plane_id = 0;
  std::vector<Eigen::Vector3d> points;
  std::vector<double> times;

  friend bool operator==(const SegmentCloud&, const SegmentCloud&) = default;
};

enum class CellState : std::uint8_t { Unobserved = 0, Free = 1, Occupied = 2 };

/// Dense 3-D voxel map, x-fastest then y then z.
struct VoxelGrid {
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  double resolution = 0.1;
  std::array<int, 3> dims{1, 1, 1};
  std::vector<CellState> states;

  std::size_t size() const { return std::size_t(dims[0]) * dims[1] * dims[2]; }
  std::size_t index(int i, int j, int k) const {
    return (std::size_t(k) * dims[1] + j) * dims[0] + i;
  }
  CellState at(int i, int j, int k) const { return states[index(i, j, k)]; }

  /// Throws InvariantViolation when resolution, dims or state count are inconsistent.
  void validate() const;

  friend bool operator==(const VoxelGrid&, const VoxelGrid&) = default;
};

/// Per-voxel observation times, used to rebuild the grid as it looked at
/// any instant. Infinity marks "never".
struct VoxelTimeline {
  std::vector<double> first_free;
  std::vector<double> first_occupied;

  friend bool operator==(const VoxelTimeline&, const VoxelTimeline&) = default;
};

/// Half-open range of cells [i0, i1) x [j0, j1).
struct CellRange {
  int i0 = 0, i1 = 0, j0 = 0, j1 = 0;

  bool empty() const { return i1 <= i0 || j1 <= j0; }
  std::int64_t count() const { return empty() ? 0 : std::int64_t(i1 - i0) * (j1 - j0); }
  friend bool operator==(const CellRange&, const CellRange&) = default;
};

/// Axis-aligned box in meters.
struct Bounds {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Horizontal slice of the voxel map; the universe of the cover problem
/// lives on this raster.
struct OccupancyGrid2D {
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  double resolution = 0.1;
  int nx = 0;
  int ny = 0;
  std::vector<CellState> states;
  double slice_height = 0.0;

  std::size_t size() const { return std::size_t(nx) * ny; }
  int index(int i, int j) const { return j * nx + i; }
  int cell_i(int index) const { return index % nx; }
  int cell_j(int index) const { return index / nx; }
  CellState at(int i, int j) const { return states[std::size_t(index(i, j))]; }
  Eigen::Vector2d cell_center(int i, int j) const {
    return origin + resolution * Eigen::Vector2d(i + 0.5, j + 0.5);
  }

  /// Cells whose centers lie strictly inside `b`, clipped to the grid.
  CellRange rasterize(const Bounds& b) const;
  /// World-space box of a cell range.
  Bounds cell_bounds(const CellRange& r) const;

  friend bool operator==(const OccupancyGrid2D&, const OccupancyGrid2D&) = default;
};

struct Doorway {
  int id = 0;
  int plane_id = 0;
  double center = 0.0;  ///< along the plane's in-plane horizontal axis
  double width = 0.0;
  double response = 0.0;

  double lo() const { return center - 0.5 * width; }
  double hi() const { return center + 0.5 * width; }
  friend bool operator==(const Doorway&, const Doorway&) = default;
};

/// Rectangle bounded by one inward-facing plane pair per axis.
struct CandidateRect {
  int id = -1;  ///< index in the pruned list, -1 before pruning
  int x_lo_plane = 0, x_hi_plane = 0, y_lo_plane = 0, y_hi_plane = 0;
  Bounds bounds;
  CellRange cells;
  std::int64_t weight = 0;         ///< every cell in bounds, any state
  std::vector<int> covered_free;   ///< sorted free-cell indices

  std::array<int, 4> plane_key() const { return {x_lo_plane, x_hi_plane, y_lo_plane, y_hi_plane}; }
};

struct CellStats {
  std::int64_t free = 0, occupied = 0, unobserved = 0;
  std::int64_t total() const { return free + occupied + unobserved; }
  friend bool operator==(const CellStats&, const CellStats&) = default;
};

enum class RegionLabel : std::uint8_t { Unlabeled, Room, Corridor };

using Polygon = std::vector<Eigen::Vector2d>;

struct Region {
  int id = 0;
  Polygon outer_boundary;      ///< rectilinear, counter-clockwise
  std::vector<Polygon> holes;  ///< clockwise; ignored by the classifier
  std::vector<int> member_rects;
  RegionLabel label = RegionLabel::Unlabeled;
  CellStats cell_stats;
  std::vector<int> cells;  ///< sorted grid indices
};

struct Transition {
  int doorway_id = 0;
  int region_a = 0;
  std::optional<int> region_b;  ///< empty means the exterior
  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Shape features exported alongside each region.
struct RegionFeatures {
  double area = 0, perimeter = 0, aspect_ratio = 0, turning_distance = 0;
};

struct SpeculationStats {
  std::int64_t cells_in_plan = 0, known_free = 0, occupied = 0, speculated_free = 0;
};

struct FloorPlan {
  std::vector<Region> regions;
  std::vector<RegionFeatures> features;  ///< parallel to regions
  std::vector<Doorway> doorways;
  std::vector<LayoutPlane> planes;
  std::vector<Transition> transitions;
  std::vector<int> unattached_doorways;
  double slice_height = 0.0;
  std::string provenance;                 ///< scene name
  std::optional<double> observed_until;   ///< latest observation time in the input
  SpeculationStats speculation;
};

/// Planes split by (axis, facing); each list sorted by id.
struct PlanePartition {
  std::vector<LayoutPlane> x_pos, x_neg, y_pos, y_neg;
};

PlanePartition plane_partition(const std::vector<LayoutPlane>& planes);

std::string to_string(Axis a);
std::string to_string(Facing f);
std::string to_string(RegionLabel l);

/// Signed shoelace area; positive for counter-clockwise polygons.
double signed_area(const Polygon& poly);
double perimeter(const Polygon& poly);
Bounds bounding_box(const Polygon& poly);

}  // namespace layout
