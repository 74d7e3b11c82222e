#include "layout/error.hpp"
#include "layout/ingest.hpp"
#include "layout/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <functional>

using namespace layout;
using namespace layout::synth;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::MissingFile;
}

}  // namespace

TEST_CASE("fixture plane and door counts") {
  auto w = generate_world(one_room());
  CHECK(w.planes.size() == 4);
  CHECK(w.doors.empty());
  CHECK(w.raster.nx == 60);
  CHECK(w.raster.ny == 60);

  w = generate_world(two_rooms_shared_wall());
  CHECK(w.planes.size() == 7);
  CHECK(w.doors.size() == 1);

  for (std::size_t k = 1; k < w.planes.size(); ++k) CHECK(w.planes[k].id == int(k));
}

TEST_CASE("invalid specs") {
  WorldSpec s = one_room();
  s.spaces.push_back({"other", SpaceKind::Room, {Bounds{5, 8, 0, 6}}});
  CHECK(kind_of([&] { generate_world(s); }) == ErrorKind::InvalidSpec);

  s = two_rooms_shared_wall();
  s.doors[0].center = 5.5;  // beyond the 5 m shared stretch
  CHECK(kind_of([&] { generate_world(s); }) == ErrorKind::InvalidSpec);

  s = one_room();
  s.doors = {{"room", "nowhere", 3.0, 1.0}};
  CHECK(kind_of([&] { generate_world(s); }) == ErrorKind::InvalidSpec);

  s = one_room();
  s.waypoints = {{2, 3}, {8, 3}};
  const auto w = generate_world(s);
  CHECK(kind_of([&] { observe_world(w); }) == ErrorKind::PoseOutsideFreeSpace);
}

TEST_CASE("spec JSON round trip") {
  const WorldSpec s = office_block();
  const WorldSpec back = parse_world_spec(to_json(s));
  CHECK(to_json(back) == to_json(s));
  CHECK(back.spaces.size() == s.spaces.size());
  CHECK(back.doors.size() == s.doors.size());
}

TEST_CASE("noiseless walls are observed end to end") {
  const auto w = generate_world(one_room());
  const Scene scene = observe_world(w);
  REQUIRE(scene.clouds.size() == 4);
  for (const auto& c : scene.clouds) {
    const auto* p = scene.find_plane(c.plane_id);
    REQUIRE(p);
    std::vector<int> hits(60, 0);
    for (const auto& q : c.points) {
      CHECK(across_plane(p->axis, q) == doctest::Approx(p->offset));
      const int b = int(std::floor(along_plane(p->axis, q) / 0.1));
      if (b >= 0 && b < 60) ++hits[std::size_t(b)];
    }
    CHECK(std::count(hits.begin(), hits.end(), 0) == 0);
  }
}

TEST_CASE("dropout 1 leaves only free space") {
  WorldSpec s = one_room();
  s.dropout = 1.0;
  const Scene scene = observe_world(generate_world(s));
  std::size_t points = 0;
  for (const auto& c : scene.clouds) points += c.points.size();
  CHECK(points == 0);
  const auto g = slice_grid(*scene.voxels, 1.0);
  CHECK(std::count(g.states.begin(), g.states.end(), CellState::Free) > 3000);
}

TEST_CASE("partial walk only steps past the thresholds") {
  const auto spec = random_office(4, false);
  const auto poses = sample_trajectory(spec);
  for (const auto& sp : spec.spaces) {
    if (sp.kind == SpaceKind::Corridor) continue;
    const Bounds& r = sp.rects[0];
    for (const auto& p : poses) {
      const auto& q = p.position;
      if (q.x() <= r.xmin || q.x() >= r.xmax || q.y() <= r.ymin || q.y() >= r.ymax) continue;
      CAPTURE(sp.name);
      CHECK(std::min(q.y() - r.ymin, r.ymax - q.y()) <= 0.3 + 1e-9);
    }
  }
}

TEST_CASE("observation is deterministic under a fixed seed") {
  WorldSpec s = two_rooms_shared_wall();
  s.noise = 0.03;
  s.dropout = 0.2;
  const auto w = generate_world(s);
  const Scene a = observe_world(w), b = observe_world(w);
  CHECK(a.clouds == b.clouds);
  CHECK(*a.voxels == *b.voxels);
  s.seed = 2;
  const Scene c = observe_world(generate_world(s));
  CHECK_FALSE(a.clouds == c.clouds);
}

TEST_CASE("sample_wall leaves apertures empty below door height") {
  const auto c = sample_wall(0, 10.0, {{5.0, 1.0}}, 0.0, 0.0, 1);
  for (const auto& p : c.points) {
    CHECK(p.x() == 0.0);
    if (p.z() < 2.1 - 1e-9) CHECK_FALSE((p.y() > 4.5 + 1e-9 && p.y() < 5.5 - 1e-9));
  }
}
