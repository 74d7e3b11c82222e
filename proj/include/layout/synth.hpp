#pragma once

// Synthetic Manhattan worlds: a small grammar of rectangular spaces and
// doors, ground truth derived from it, and a panoramic ray caster that
// produces partial observations in the ingest formats.

#include "layout/ingest.hpp"
#include "layout/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace layout::synth {

enum class SpaceKind { Room, Corridor };

struct SpaceSpec {
  std::string name;
  SpaceKind kind = SpaceKind::Room;
  std::vector<Bounds> rects;  ///< union forms the space
};

inline constexpr const char* kExterior = "exterior";

struct DoorSpec {
  std::string a;
  std::string b = kExterior;
  double center = 0.0;  ///< along the wall
  double width = 1.0;
  std::optional<Axis> axis;       ///< inferred when absent
  std::optional<double> offset;   ///< inferred when absent
};

struct WorldSpec {
  std::string name = "world";
  std::vector<SpaceSpec> spaces;
  std::vector<DoorSpec> doors;
  std::vector<Eigen::Vector2d> waypoints;
  double step = 0.5;   ///< pose spacing along the trajectory, meters
  double speed = 0.5;  ///< meters per second
  double noise = 0.0;
  double dropout = 0.0;
  double margin = 0.0;
  double resolution = 0.1;
  double wall_height = 3.0;
  double door_height = 2.1;
  double sensor_height = 1.05;
  int azimuths = 720;
  double max_elevation_deg = 60.0;
  int elevations = 13;
  double max_range = 20.0;
  std::uint64_t seed = 1;
};

WorldSpec parse_world_spec(const nlohmann::json& j);
WorldSpec load_world_spec(const std::filesystem::path& path);
nlohmann::json to_json(const WorldSpec& spec);

/// One axis-aligned wall piece of a space boundary; the space lies on the
/// side the face normal points to.
struct WallFace {
  Axis axis = Axis::X;
  Facing facing = Facing::Positive;
  double offset = 0.0;
  double lo = 0.0, hi = 0.0;
  int space = 0;
};

struct DoorTruth {
  int index = 0;
  Axis axis = Axis::X;
  double offset = 0.0;
  double center = 0.0, width = 0.0;
  int space_a = 0;
  int space_b = -1;  ///< -1 for the exterior
  double lo() const { return center - 0.5 * width; }
  double hi() const { return center + 0.5 * width; }
};

struct World {
  WorldSpec spec;
  std::vector<WallFace> faces;
  std::vector<LayoutPlane> planes;  ///< every distinct face, ids in (axis, facing, offset) order
  std::vector<DoorTruth> doors;
  Bounds extent;                    ///< spaces plus margin
  OccupancyGrid2D raster;           ///< empty states; geometry of the voxel grid's xy plane
  std::vector<std::vector<int>> space_cells;  ///< per space, sorted cell indices

  int plane_of(const WallFace& f) const;
};

/// Validates the spec and derives walls, planes, doors and ground-truth rasters.
/// Throws InvalidSpec for overlapping spaces or a door not on a wall of its spaces.
World generate_world(const WorldSpec& spec);

/// Poses sampled along the waypoint polyline every `spec.step` meters.
std::vector<TrajectorySample> sample_trajectory(const WorldSpec& spec);

/// Ray-casts from every pose. Throws PoseOutsideFreeSpace when a pose is
/// not inside a space or a door opening.
Scene observe_world(const World& world);

/// Points on a wall at x = 0 spanning y in [0, length], z in [0, height],
/// on a `spacing` lattice, with apertures (center, width) open below
/// `door_height`. Used to exercise the doorway detector in isolation.
struct Aperture {
  double center = 0.0, width = 0.0;
};
SegmentCloud sample_wall(int plane_id, double length, const std::vector<Aperture>& apertures, double noise,
                         double dropout, std::uint64_t seed, double height = 3.0, double door_height = 2.1,
                         double spacing = 0.05);

// Fixtures.
WorldSpec one_room();
WorldSpec two_rooms_shared_wall();
WorldSpec three_rooms_corridor();
WorldSpec four_rooms_corridor();  ///< trajectory enters two of the four rooms
WorldSpec l_shaped_room();
WorldSpec office_block();
WorldSpec leak_world();  ///< exterior door with a margin, so free cells lie outside every wall
/// Rooms on both sides of a long corridor. `full` visits every room,
/// otherwise the walk stays mostly in the corridor.
WorldSpec random_office(std::uint64_t seed, bool full = true);

std::vector<std::string> fixture_names();
WorldSpec fixture(const std::string& name);

}  // namespace layout::synth
