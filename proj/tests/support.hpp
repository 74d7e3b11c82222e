#pragma once

#include "layout/candidates.hpp"
#include "layout/pipeline.hpp"
#include "layout/synth.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace support {

using namespace layout;

// three_rooms_corridor with a walk that stands in every space.
inline synth::WorldSpec three_rooms_full() {
  auto s = synth::three_rooms_corridor();
  s.name = "three_rooms_full";
  s.waypoints = {{0.5, 1.25}, {5.5, 1.25}, {5.5, 5.75}, {5.5, 1.25}, {19, 1.25}, {19, 5.75},
                 {19, 1.25},  {31, 1.25}, {31, 4},     {31, 8},     {31, -0.5}};
  return s;
}

inline std::size_t overlap(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out.size();
}

/// Ground-truth space -> best overlapping region, or -1.
struct Match {
  std::vector<int> region_of;
  std::vector<double> iou;
  bool labels_ok = true;
  bool transitions_ok = true;
};

inline Match match_truth(const synth::World& w, const FloorPlan& plan) {
  Match m;
  for (std::size_t s = 0; s < w.space_cells.size(); ++s) {
    int best = -1;
    std::size_t most = 0;
    for (const auto& r : plan.regions) {
      const std::size_t o = overlap(w.space_cells[s], r.cells);
      if (o > most) {
        most = o;
        best = r.id;
      }
    }
    m.region_of.push_back(best);
    m.iou.push_back(best < 0 ? 0.0 : cell_iou(w.space_cells[s], plan.regions[std::size_t(best)].cells));
    const RegionLabel want =
        w.spec.spaces[s].kind == synth::SpaceKind::Room ? RegionLabel::Room : RegionLabel::Corridor;
    if (best < 0 || plan.regions[std::size_t(best)].label != want) m.labels_ok = false;
  }
  std::set<std::pair<int, int>> want, got;
  auto key = [](int a, int b) { return std::minmax(a, b); };
  for (const auto& d : w.doors) {
    const int a = m.region_of[std::size_t(d.space_a)];
    const int b = d.space_b < 0 ? -1 : m.region_of[std::size_t(d.space_b)];
    want.insert(key(a, b));
  }
  for (const auto& t : plan.transitions) got.insert(key(t.region_a, t.region_b.value_or(-1)));
  m.transitions_ok = want == got && plan.transitions.size() == w.doors.size();
  return m;
}

/// Bounding-box extents (width, height) of a cell set, in meters.
inline std::pair<double, double> extents(const std::vector<int>& cells, const OccupancyGrid2D& g) {
  int i0 = g.nx, i1 = -1, j0 = g.ny, j1 = -1;
  for (int c : cells) {
    i0 = std::min(i0, g.cell_i(c));
    i1 = std::max(i1, g.cell_i(c));
    j0 = std::min(j0, g.cell_j(c));
    j1 = std::max(j1, g.cell_j(c));
  }
  return {(i1 - i0 + 1) * g.resolution, (j1 - j0 + 1) * g.resolution};
}

// Random set-cover instance on a 20 x 10 raster: up to 15 rectangles of
// random extent, weight = area, about 85% of the cells free.
struct CoverInstance {
  std::vector<CandidateRect> cands;
  std::vector<int> universe;
};

inline CoverInstance random_cover_instance(std::mt19937_64& rng) {
  std::bernoulli_distribution is_free(0.85);
  std::vector<char> free(200);
  for (auto& f : free) f = is_free(rng);
  CoverInstance in;
  const int m = std::uniform_int_distribution<int>(3, 15)(rng);
  for (int k = 0; k < m; ++k) {
    const int i0 = std::uniform_int_distribution<int>(0, 17)(rng), j0 = std::uniform_int_distribution<int>(0, 7)(rng);
    const int i1 = std::uniform_int_distribution<int>(i0 + 1, 20)(rng);
    const int j1 = std::uniform_int_distribution<int>(j0 + 1, 10)(rng);
    CandidateRect r;
    r.x_lo_plane = r.x_hi_plane = r.y_lo_plane = r.y_hi_plane = k;
    r.weight = (i1 - i0) * (j1 - j0);
    for (int j = j0; j < j1; ++j)
      for (int i = i0; i < i1; ++i)
        if (free[std::size_t(j * 20 + i)]) r.covered_free.push_back(j * 20 + i);
    if (!r.covered_free.empty()) in.cands.push_back(r);
  }
  for (const auto& c : in.cands) in.universe.insert(in.universe.end(), c.covered_free.begin(), c.covered_free.end());
  std::sort(in.universe.begin(), in.universe.end());
  in.universe.erase(std::unique(in.universe.begin(), in.universe.end()), in.universe.end());
  return in;
}

/// True room rectangles bounded by four observed planes that are missing
/// from `survivors`, by space name.
inline std::vector<std::string> missing_true_rects(const synth::World& w, const Scene& scene,
                                                   const std::vector<CandidateRect>& survivors) {
  auto observed = [&](Axis a, Facing f, double off) {
    return std::any_of(scene.planes.begin(), scene.planes.end(), [&](const LayoutPlane& p) {
      return p.axis == a && p.facing == f && std::abs(p.offset - off) < 0.05;
    });
  };
  std::vector<std::string> missing;
  for (const auto& sp : w.spec.spaces) {
    if (sp.rects.size() != 1) continue;
    const Bounds& r = sp.rects[0];
    if (!observed(Axis::X, Facing::Positive, r.xmin) || !observed(Axis::X, Facing::Negative, r.xmax) ||
        !observed(Axis::Y, Facing::Positive, r.ymin) || !observed(Axis::Y, Facing::Negative, r.ymax))
      continue;
    const bool kept = std::any_of(survivors.begin(), survivors.end(), [&](const CandidateRect& c) {
      return std::abs(c.bounds.xmin - r.xmin) < 0.05 && std::abs(c.bounds.xmax - r.xmax) < 0.05 &&
             std::abs(c.bounds.ymin - r.ymin) < 0.05 && std::abs(c.bounds.ymax - r.ymax) < 0.05;
    });
    if (!kept) missing.push_back(sp.name);
  }
  return missing;
}

/// Adds one random segment point and one random doorway `trials` times and
/// checks that the survivor set only shrinks.
inline bool pruning_monotone(const synth::World& w, const Scene& scene, const std::vector<Doorway>& doorways,
                             const OccupancyGrid2D& grid, std::mt19937_64& rng, int trials = 5) {
  auto keys = [](const std::vector<CandidateRect>& v) {
    std::set<std::array<int, 4>> out;
    for (const auto& c : v) out.insert(c.plane_key());
    return out;
  };
  const auto segs = project_segments_2d(scene.clouds, scene.planes);
  const auto all = enumerate_rects(scene.planes);
  const auto before = keys(prune_rects(all, segs, doorways, scene.planes, grid));
  std::uniform_real_distribution<double> ux(w.extent.xmin, w.extent.xmax), uy(w.extent.ymin, w.extent.ymax);
  for (int t = 0; t < trials && !segs.empty(); ++t) {
    auto more = segs;
    auto& s = more[std::size_t(t) % more.size()];
    s.along.push_back(s.axis == Axis::X ? uy(rng) : ux(rng));
    std::sort(s.along.begin(), s.along.end());
    auto doors = doorways;
    const auto& p = scene.planes[std::size_t(t) % scene.planes.size()];
    doors.push_back({int(doors.size()), p.id, p.axis == Axis::X ? uy(rng) : ux(rng), 1.0, 1.0});
    const auto after = keys(prune_rects(all, more, doors, scene.planes, grid));
    if (!std::includes(before.begin(), before.end(), after.begin(), after.end())) return false;
  }
  return true;
}

}  // namespace support
