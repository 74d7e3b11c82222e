#pragma once

#include "layout/model.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace layout {

/// Maximum distance of a segment point from its plane's surface.
inline constexpr double kAssocTol = 0.15;

struct TrajectorySample {
  double t = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  friend bool operator==(const TrajectorySample&, const TrajectorySample&) = default;
};

/// Everything the upstream mapping system hands over.
struct Scene {
  std::string name;
  std::vector<LayoutPlane> planes;
  std::vector<SegmentCloud> clouds;
  std::optional<VoxelGrid> voxels;
  std::optional<VoxelTimeline> timeline;
  std::vector<TrajectorySample> trajectory;

  const LayoutPlane* find_plane(int id) const;
  bool timestamped() const;
};

enum class SegmentEncoding { Text, Binary };

/// Reads a manifest and every file it references, then validates the result.
Scene load_scene(const std::filesystem::path& manifest);

/// Writes `scene` as `dir/scene.json` plus one file per referenced entity.
/// Returns the manifest path.
std::filesystem::path save_scene(const Scene& scene, const std::filesystem::path& dir,
                                 SegmentEncoding encoding = SegmentEncoding::Binary);

/// Checks unique plane ids, cloud/plane references and point-to-plane
/// distances. Offending points are reported per plane in one error.
void validate_scene(const Scene& scene, double assoc_tol = kAssocTol);

/// 2-D occupancy at height `h`: layer k = floor((h - origin.z) / resolution).
OccupancyGrid2D slice_grid(const VoxelGrid& grid, double h);

/// In-plane coordinates of the points at or below `z_max`, one entry per plane.
struct ProjectedSegment {
  int plane_id = 0;
  Axis axis = Axis::X;
  double offset = 0.0;
  std::vector<double> along;  ///< sorted ascending
};

std::vector<ProjectedSegment> project_segments_2d(const std::vector<SegmentCloud>& clouds,
                                                  const std::vector<LayoutPlane>& planes,
                                                  double z_max = 2.0);

/// Voxel states as they were at time `t`.
VoxelGrid voxels_at(const VoxelGrid& final_grid, const VoxelTimeline& timeline, double t);

/// The scene restricted to observations made at or before `t`. Planes without
/// any retained point are dropped when the scene carries timestamps.
Scene scene_until(const Scene& scene, double t);

/// Latest timestamp found in points, voxel timeline or trajectory.
std::optional<double> latest_observation(const Scene& scene);

}  // namespace layout
