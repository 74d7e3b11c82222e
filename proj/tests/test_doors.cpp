#include "layout/doors.hpp"
#include "layout/synth.hpp"

#include <doctest.h>

#include <cmath>

using namespace layout;

namespace {

const LayoutPlane kWall{0, Axis::X, Facing::Positive, 0.0};

SegmentCloud wall_with(std::vector<synth::Aperture> gaps, double noise = 0.0, double dropout = 0.0,
                       std::uint64_t seed = 1) {
  return synth::sample_wall(0, 10.0, gaps, noise, dropout, seed);
}

Eigen::Index bin_of(const Histogram& h, double x) { return Eigen::Index(std::floor((x - h.origin) / h.bin_width)); }

}  // namespace

TEST_CASE("histogram basics") {
  SegmentCloud high{0, {{0, 1, 2.5}, {0, 2, 3.0}}, {}};
  CHECK(plane_histogram(high, Axis::X).empty());

  SegmentCloud same{0, {}, {}};
  for (int k = 0; k < 10; ++k) same.points.emplace_back(0.0, 3.14, 1.0);
  const auto h = plane_histogram(same, Axis::X);
  REQUIRE(h.counts.size() == 3);  // one bin plus one pad each side
  CHECK((h.counts > 0).count() == 1);
  CHECK(h.counts.maxCoeff() == 10);
  CHECK(h.bin_center(bin_of(h, 3.14)) == doctest::Approx(3.15));
}

TEST_CASE("aperture leaves the histogram empty") {
  const auto h = plane_histogram(wall_with({{5.0, 1.0}}), Axis::X);
  for (Eigen::Index b = bin_of(h, 4.55); b <= bin_of(h, 5.45); ++b) CHECK(h.counts(b) == 0);
  CHECK(h.counts(bin_of(h, 3.0)) > 0);
}

TEST_CASE("smoothed gradient shapes") {
  Histogram flat;
  flat.counts = Eigen::ArrayXd::Constant(40, 7.0);
  CHECK(smoothed_gradient(flat).values.abs().maxCoeff() == doctest::Approx(0.0));

  Histogram step;
  step.counts = Eigen::ArrayXd::Zero(40);
  step.counts.tail(20).setOnes();
  const auto s = smoothed_gradient(step);
  CHECK(s.values.minCoeff() >= -1e-12);
  Eigen::Index peak;
  s.values.maxCoeff(&peak);
  // The step lies between bins 19 and 20.
  CHECK((peak == 19 || peak == 20));
  for (int k = 0; k < 8; ++k) CHECK(s.values(19 - k) == doctest::Approx(s.values(20 + k)));

  const auto door = smoothed_gradient(plane_histogram(wall_with({{5.0, 1.0}}), Axis::X));
  Eigen::Index lo, hi;
  door.values.minCoeff(&lo);
  door.values.maxCoeff(&hi);
  CHECK(door.origin + (lo + 0.5) * door.bin_width == doctest::Approx(4.5).epsilon(0.03));
  CHECK(door.origin + (hi + 0.5) * door.bin_width == doctest::Approx(5.5).epsilon(0.03));
}

TEST_CASE("detector on ideal walls") {
  Signal zero;
  zero.values = Eigen::ArrayXd::Zero(50);
  zero.raw = Eigen::ArrayXd::Zero(50);
  CHECK(detect_doorways(zero, 0).empty());

  const auto one = detect_plane_doorways(wall_with({{5.0, 1.0}}), kWall);
  REQUIRE(one.size() == 1);
  CHECK(one[0].center == doctest::Approx(5.0).epsilon(0.02));
  CHECK(std::abs(one[0].width - 1.0) <= 0.1);

  CHECK(detect_plane_doorways(wall_with({{5.0, 1.6}}), kWall).empty());
  CHECK(detect_plane_doorways(wall_with({{5.0, 0.5}}), kWall).empty());
  for (double w : {0.6, 1.4})
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      CHECK(detect_plane_doorways(wall_with({{5.0, w}}, 0.03, 0.0, seed), kWall).empty());
  CHECK(detect_plane_doorways(wall_with({}), kWall).empty());
}

TEST_CASE("apertures at the ends of the data are not doors") {
  // A gap starting 0.2 m from the end lacks wall evidence on one side.
  CHECK(detect_plane_doorways(wall_with({{0.7, 1.0}}), kWall).empty());
  CHECK(detect_plane_doorways(wall_with({{9.3, 1.0}}), kWall).empty());
}

TEST_CASE("detection is shift equivariant") {
  const auto base = detect_plane_doorways(wall_with({{4.0, 1.0}, {7.0, 0.9}}), kWall);
  REQUIRE(base.size() == 2);
  auto cloud = wall_with({{4.0, 1.0}, {7.0, 0.9}});
  for (auto& p : cloud.points) p.y() += 1.37;
  const auto moved = detect_plane_doorways(cloud, kWall);
  REQUIRE(moved.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(moved[k].center - base[k].center - 1.37) <= 0.1 + 1e-9);
}

TEST_CASE("scaling counts scales responses") {
  const auto h = plane_histogram(wall_with({{3.0, 1.0}, {6.5, 1.2}}, 0.03, 0.2, 4), Axis::X);
  Histogram h3 = h;
  h3.counts *= 3.0;
  DoorParams p;
  p.response_min = 2.0;
  const auto a = detect_doorways(smoothed_gradient(h), 0, p);
  p.response_min = 6.0;
  const auto b = detect_doorways(smoothed_gradient(h3), 0, p);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].center == doctest::Approx(b[k].center));
    CHECK(a[k].width == doctest::Approx(b[k].width));
    CHECK(b[k].response == doctest::Approx(3.0 * a[k].response));
  }
}

TEST_CASE("raising the threshold only removes doorways") {
  const auto sig = smoothed_gradient(plane_histogram(wall_with({{2.5, 0.8}, {5.0, 1.0}, {7.5, 1.2}}, 0.03, 0.3, 9), Axis::X));
  DoorParams p;
  std::vector<Doorway> prev;
  for (double t : {0.5, 2.0, 5.0, 10.0, 20.0, 40.0, 80.0}) {
    p.response_min = t;
    const auto now = detect_doorways(sig, 0, p);
    if (t > 0.5) {
      for (const auto& d : now) {
        const bool found = std::any_of(prev.begin(), prev.end(), [&](const Doorway& q) {
          return q.center == d.center && q.width == d.width;
        });
        CHECK(found);
      }
      CHECK(now.size() <= prev.size());
    }
    for (std::size_t k = 1; k < now.size(); ++k) CHECK(now[k - 1].hi() <= now[k].lo());
    prev = now;
  }
}

TEST_CASE("doorways seen from both faces of a wall merge") {
  const std::vector<LayoutPlane> planes{{0, Axis::X, Facing::Negative, 5.0}, {1, Axis::X, Facing::Positive, 5.0},
                                        {2, Axis::X, Facing::Positive, 9.0}};
  const std::vector<Doorway> found{{0, 0, 2.5, 1.0, 10.0}, {1, 1, 2.55, 0.9, 12.0}, {2, 2, 2.5, 1.0, 11.0}};
  const auto merged = merge_coincident_doorways(found, planes);
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].plane_id == 1);
  CHECK(merged[1].plane_id == 2);
  CHECK(merged[0].id == 0);
  CHECK(merged[1].id == 1);
}
