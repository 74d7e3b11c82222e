#include "layout/candidates.hpp"
#include "layout/pipeline.hpp"
#include "layout/synth.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace layout;

namespace {

OccupancyGrid2D free_grid(int nx, int ny, double res = 0.1) {
  OccupancyGrid2D g;
  g.nx = nx;
  g.ny = ny;
  g.resolution = res;
  g.states.assign(std::size_t(nx) * ny, CellState::Free);
  return g;
}

std::vector<LayoutPlane> box_planes(double x0, double x1, double y0, double y1) {
  return {{0, Axis::X, Facing::Positive, x0},
          {1, Axis::X, Facing::Negative, x1},
          {2, Axis::Y, Facing::Positive, y0},
          {3, Axis::Y, Facing::Negative, y1}};
}

}  // namespace

TEST_CASE("enumeration is the product of partition sizes") {
  CHECK(enumerate_rects(box_planes(0, 5, 0, 5)).size() == 1);
  auto six = box_planes(0, 5, 0, 5);
  six.push_back({4, Axis::X, Facing::Positive, 2});
  six.push_back({5, Axis::Y, Facing::Positive, 2});
  CHECK(enumerate_rects(six).size() == 4);

  const auto w = synth::generate_world(synth::three_rooms_corridor());
  const auto p = plane_partition(w.planes);
  CHECK(p.x_pos.size() == 4);
  CHECK(p.x_neg.size() == 3);
  CHECK(p.y_pos.size() == 3);
  CHECK(p.y_neg.size() == 2);
  CHECK(enumerate_rects(w.planes).size() == 72);
}

TEST_CASE("pruning rules") {
  const auto g = free_grid(100, 100);
  // Outward-facing pair: X+ at 6 lies east of X- at 4.
  auto rects = enumerate_rects(box_planes(6, 4, 0, 5));
  PruneStats st;
  CHECK(prune_rects(rects, {}, {}, box_planes(6, 4, 0, 5), g, {}, &st).empty());
  CHECK(st.too_narrow == 1);

  const auto planes = box_planes(0, 5, 0, 5);
  rects = enumerate_rects(planes);
  CHECK(prune_rects(rects, {}, {}, planes, g).size() == 1);

  // Points on the rectangle's own walls, and one cell inside them, are tolerated.
  std::vector<ProjectedSegment> own{{0, Axis::X, 0.0, {0.5, 2.0, 4.5}}, {5, Axis::X, 0.1, {2.0}}};
  CHECK(prune_rects(rects, own, {}, planes, g).size() == 1);

  std::vector<ProjectedSegment> inside{{9, Axis::X, 2.5, {2.0}}};
  CHECK(prune_rects(rects, inside, {}, planes, g, {}, &st).empty());
  CHECK(st.segment_collision == 1);

  // Points of an interior plane that lie outside the eroded rectangle do not count.
  std::vector<ProjectedSegment> beyond{{9, Axis::X, 2.5, {-3.0, 4.95, 7.0}}};
  CHECK(prune_rects(rects, beyond, {}, planes, g).size() == 1);

  auto with_door = planes;
  with_door.push_back({9, Axis::Y, Facing::Positive, 2.5});
  const std::vector<Doorway> door{{0, 9, 2.0, 1.0, 1.0}};
  CHECK(prune_rects(rects, {}, door, with_door, g, {}, &st).empty());
  CHECK(st.doorway_collision == 1);

  auto blocked = g;
  std::fill(blocked.states.begin(), blocked.states.end(), CellState::Occupied);
  CHECK(prune_rects(rects, {}, {}, planes, blocked, {}, &st).empty());
  CHECK(st.no_free_cells == 1);
}

TEST_CASE("survivor weight counts every cell in bounds") {
  auto g = free_grid(60, 60);
  for (int i = 0; i < 10; ++i) g.states[std::size_t(g.index(i + 5, 7))] = CellState::Occupied;
  for (int i = 0; i < 4; ++i) g.states[std::size_t(g.index(i + 5, 8))] = CellState::Unobserved;
  const auto planes = box_planes(0, 3, 0, 2);
  const auto s = prune_rects(enumerate_rects(planes), {}, {}, planes, g);
  REQUIRE(s.size() == 1);
  CHECK(s[0].weight == 30 * 20);
  CHECK(std::int64_t(s[0].covered_free.size()) == 600 - 14);
  CHECK(std::is_sorted(s[0].covered_free.begin(), s[0].covered_free.end()));
}

TEST_CASE("three_rooms_corridor survivors match the ground-truth oracle") {
  const auto world = synth::generate_world(support::three_rooms_full());
  const auto want = oracle::prune_from_truth(world);
  CHECK(want.size() == 12);

  const Scene scene = synth::observe_world(world);
  const auto res = run_batch(scene);
  CHECK(res.report.prune.enumerated == 72);
  CHECK(res.report.prune.survivors == 12);

  // Same rectangles, by bounds.
  const auto grid = slice_grid(*scene.voxels, 1.0);
  const auto segs = project_segments_2d(scene.clouds, scene.planes);
  const auto got = prune_rects(enumerate_rects(scene.planes), segs, res.plan.doorways, scene.planes, grid);
  std::vector<oracle::Box> boxes;
  for (const auto& c : got) boxes.push_back({c.bounds.xmin, c.bounds.xmax, c.bounds.ymin, c.bounds.ymax});
  std::sort(boxes.begin(), boxes.end());
  REQUIRE(boxes.size() == want.size());
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    CHECK(boxes[k].xmin == doctest::Approx(want[k].xmin).epsilon(1e-6));
    CHECK(boxes[k].xmax == doctest::Approx(want[k].xmax).epsilon(1e-6));
    CHECK(boxes[k].ymin == doctest::Approx(want[k].ymin).epsilon(1e-6));
    CHECK(boxes[k].ymax == doctest::Approx(want[k].ymax).epsilon(1e-6));
  }
}

TEST_CASE("pruning soundness and monotonicity on fixtures") {
  std::mt19937_64 rng(11);
  for (const auto& name : synth::fixture_names()) {
    CAPTURE(name);
    const auto world = synth::generate_world(synth::fixture(name));
    const Scene scene = synth::observe_world(world);
    const auto res = run_batch(scene);
    const auto grid = slice_grid(*scene.voxels, 1.0);
    const auto segs = project_segments_2d(scene.clouds, scene.planes);
    const auto base = prune_rects(enumerate_rects(scene.planes), segs, res.plan.doorways, scene.planes, grid);

    CHECK(support::missing_true_rects(world, scene, base).empty());
    CHECK(support::pruning_monotone(world, scene, res.plan.doorways, grid, rng));
  }
}
