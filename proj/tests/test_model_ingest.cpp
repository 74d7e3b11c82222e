#include "layout/error.hpp"
#include "layout/ingest.hpp"
#include "layout/model.hpp"
#include "layout/synth.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace layout;

namespace {

LayoutPlane plane(int id, Axis a, Facing f, double off) { return {id, a, f, off}; }

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("layout_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("plane_partition splits by axis and facing") {
  CHECK(plane_partition({}).x_pos.empty());

  const std::vector<LayoutPlane> four = {plane(0, Axis::X, Facing::Positive, 0), plane(1, Axis::X, Facing::Negative, 5),
                                         plane(2, Axis::Y, Facing::Positive, 0), plane(3, Axis::Y, Facing::Negative, 5)};
  auto p = plane_partition(four);
  CHECK(p.x_pos.size() == 1);
  CHECK(p.x_neg.size() == 1);
  CHECK(p.y_pos.size() == 1);
  CHECK(p.y_neg.size() == 1);

  const std::vector<LayoutPlane> six = {plane(5, Axis::X, Facing::Positive, 0), plane(1, Axis::X, Facing::Positive, 4),
                                        plane(2, Axis::X, Facing::Negative, 8), plane(3, Axis::Y, Facing::Positive, 0),
                                        plane(4, Axis::Y, Facing::Positive, 3), plane(0, Axis::Y, Facing::Negative, 6)};
  p = plane_partition(six);
  CHECK(p.x_pos.size() == 2);
  CHECK(p.x_neg.size() == 1);
  CHECK(p.y_pos.size() == 2);
  CHECK(p.y_neg.size() == 1);
  CHECK(p.x_pos[0].id == 1);
  CHECK(p.x_pos.size() + p.x_neg.size() + p.y_pos.size() + p.y_neg.size() == six.size());
}

TEST_CASE("four_rooms fixture partition") {
  // Corridor plus four rooms side by side: west faces at 0, 7.5, 15, 22.5;
  // east faces at 7.5, 15, 22.5, 30; y faces at 0 / 2.5 and 2.5 / 9.
  const auto w = synth::generate_world(synth::four_rooms_corridor());
  const auto p = plane_partition(w.planes);
  CHECK(p.x_pos.size() == 4);
  CHECK(p.x_neg.size() == 4);
  CHECK(p.y_pos.size() == 2);
  CHECK(p.y_neg.size() == 2);
}

TEST_CASE("rasterize keeps cells whose centers are strictly inside") {
  OccupancyGrid2D g;
  g.nx = 10;
  g.ny = 10;
  g.states.assign(100, CellState::Free);
  CHECK(g.rasterize({0.0, 1.0, 0.0, 1.0}) == CellRange{0, 10, 0, 10});
  CHECK(g.rasterize({0.05, 0.25, 0.0, 1.0}) == CellRange{1, 2, 0, 10});
  CHECK(g.rasterize({0.3, 0.2, 0.0, 1.0}).empty());
  CHECK(g.rasterize({-5, 5, -5, 5}).count() == 100);
}

TEST_CASE("polygon helpers") {
  const Polygon sq{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CHECK(signed_area(sq) == doctest::Approx(4.0));
  CHECK(perimeter(sq) == doctest::Approx(8.0));
  const Polygon cw(sq.rbegin(), sq.rend());
  CHECK(signed_area(cw) == doctest::Approx(-4.0));
  CHECK(bounding_box(sq) == Bounds{0, 2, 0, 2});
}

TEST_CASE("voxel grid validation") {
  VoxelGrid g;
  g.dims = {2, 2, 2};
  g.states.assign(8, CellState::Free);
  CHECK_NOTHROW(g.validate());
  g.states.pop_back();
  CHECK_THROWS_AS(g.validate(), Error);
}

TEST_CASE("slice_grid selects the floor layer") {
  VoxelGrid g;
  g.dims = {2, 1, 3};
  g.states = {CellState::Free, CellState::Free, CellState::Occupied, CellState::Free,
              CellState::Unobserved, CellState::Occupied};
  auto s = slice_grid(g, 0.1);  // exactly on the boundary between layers 0 and 1
  CHECK(s.states == std::vector<CellState>{CellState::Occupied, CellState::Free});
  s = slice_grid(g, 0.05);
  CHECK(s.states == std::vector<CellState>{CellState::Free, CellState::Free});
  CHECK(s.nx == 2);
  CHECK(s.ny == 1);
  CHECK_THROWS_AS(slice_grid(g, 0.31), Error);
  CHECK_THROWS_AS(slice_grid(g, -0.01), Error);
  try {
    slice_grid(g, 5.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HeightOutOfRange);
  }
}

TEST_CASE("project_segments_2d keeps points at or below z_max") {
  const std::vector<LayoutPlane> planes{plane(3, Axis::X, Facing::Positive, 1.0)};
  SegmentCloud high{3, {{1, 0.2, 2.5}, {1, 0.4, 2.6}}, {}};
  CHECK(project_segments_2d({high}, planes)[0].along.empty());
  SegmentCloud mixed{3, {{1, 0.7, 0.5}, {1, 0.2, 1.9}, {1, 0.9, 2.1}}, {}};
  const auto p = project_segments_2d({mixed}, planes);
  REQUIRE(p.size() == 1);
  CHECK(p[0].along == std::vector<double>{0.2, 0.7});
}

TEST_CASE("scene validation rejects off-plane points and duplicate ids") {
  Scene s;
  s.planes = {plane(7, Axis::X, Facing::Positive, 1.0)};
  s.clouds = {SegmentCloud{7, {{1.0, 0, 1}, {1.5, 0, 1}}, {}}};
  try {
    validate_scene(s);
    FAIL("expected InvariantViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvariantViolation);
    CHECK(std::string(e.what()).find("plane 7") != std::string::npos);
  }
  s.clouds[0].points.pop_back();
  CHECK_NOTHROW(validate_scene(s));
  s.planes.push_back(plane(7, Axis::Y, Facing::Positive, 0.0));
  CHECK_THROWS_AS(validate_scene(s), Error);
}

TEST_CASE("empty manifest loads as an empty scene") {
  const auto dir = scratch_dir("empty");
  std::ofstream(dir / "scene.json") << R"({"planes": []})";
  const Scene s = load_scene(dir / "scene.json");
  CHECK(s.planes.empty());
  CHECK(s.clouds.empty());
  CHECK_FALSE(s.voxels.has_value());
}

TEST_CASE("missing manifest and malformed files") {
  try {
    load_scene("/nonexistent/scene.json");
    FAIL("expected MissingFile");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingFile);
  }
  const auto dir = scratch_dir("bad");
  std::ofstream(dir / "scene.json") << R"({"planes": [{"id": 0, "axis": "z", "facing": "+", "offset_m": 0}]})";
  try {
    load_scene(dir / "scene.json");
    FAIL("expected SchemaViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SchemaViolation);
  }
}

TEST_CASE("one_room round trip through files") {
  const auto world = synth::generate_world(synth::one_room());
  const Scene scene = synth::observe_world(world);
  for (auto enc : {SegmentEncoding::Binary, SegmentEncoding::Text}) {
    const auto dir = scratch_dir(enc == SegmentEncoding::Binary ? "rt_bin" : "rt_txt");
    const Scene back = load_scene(save_scene(scene, dir, enc));
    CHECK(back.planes.size() == 4);
    CHECK(back.clouds.size() == 4);
    REQUIRE(back.voxels.has_value());
    CHECK(back.voxels->dims == std::array<int, 3>{60, 60, 30});
    CHECK(back.planes == scene.planes);
    CHECK(*back.voxels == *scene.voxels);
    CHECK(back.trajectory == scene.trajectory);
    if (enc == SegmentEncoding::Binary) CHECK(back.clouds == scene.clouds);
  }
}

TEST_CASE("one_room slice at 1 m matches the visibility mask") {
  // Convex room, every pose inside: each interior cell is visible; the ring
  // of cells holding the walls is occupied.
  const auto world = synth::generate_world(synth::one_room());
  const Scene scene = synth::observe_world(world);
  const auto g = slice_grid(*scene.voxels, 1.0);
  int mismatches = 0, free = 0, occ = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const bool interior = i >= 1 && i <= 58 && j >= 1 && j <= 58;
      const CellState want = interior ? CellState::Free : CellState::Occupied;
      mismatches += g.at(i, j) != want;
      free += g.at(i, j) == CellState::Free;
      occ += g.at(i, j) == CellState::Occupied;
    }
  CHECK(mismatches == 0);
  CHECK(free == 3364);
  CHECK(occ == 236);
}

TEST_CASE("one_room west wall projects inside its extent") {
  const auto world = synth::generate_world(synth::one_room());
  const Scene scene = synth::observe_world(world);
  const auto proj = project_segments_2d(scene.clouds, scene.planes);
  const LayoutPlane* west = nullptr;
  for (const auto& p : scene.planes)
    if (p.axis == Axis::X && p.facing == Facing::Positive) west = &p;
  REQUIRE(west);
  for (const auto& s : proj)
    if (s.plane_id == west->id) {
      REQUIRE_FALSE(s.along.empty());
      CHECK(s.along.front() >= 0.0);
      CHECK(s.along.back() <= 6.0);
    }
}

TEST_CASE("scene_until keeps earlier observations") {
  const auto world = synth::generate_world(synth::four_rooms_corridor());
  const Scene scene = synth::observe_world(world);
  REQUIRE(scene.timestamped());
  const double last = *latest_observation(scene);
  const Scene early = scene_until(scene, 0.0);
  const Scene all = scene_until(scene, last);
  std::size_t early_pts = 0, all_pts = 0, full_pts = 0;
  for (const auto& c : early.clouds) early_pts += c.points.size();
  for (const auto& c : all.clouds) all_pts += c.points.size();
  for (const auto& c : scene.clouds) full_pts += c.points.size();
  CHECK(early_pts < full_pts);
  CHECK(all_pts == full_pts);
  for (const auto& c : early.clouds)
    for (double t : c.times) CHECK(t <= 0.0);
  // Monotone: a later prefix never loses free voxels.
  const auto g0 = voxels_at(*scene.voxels, *scene.timeline, 5.0);
  const auto g1 = voxels_at(*scene.voxels, *scene.timeline, 50.0);
  bool monotone = true;
  for (std::size_t k = 0; k < g0.states.size(); ++k)
    if (g0.states[k] != CellState::Unobserved && g1.states[k] == CellState::Unobserved) monotone = false;
  CHECK(monotone);
}
