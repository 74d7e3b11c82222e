#include "layout/regions.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>

namespace layout {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[std::size_t(x)] != x) x = parent_[std::size_t(x)] = parent_[std::size_t(parent_[std::size_t(x)])];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::size_t(std::max(a, b))] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

// Evidence of a wall along a seam at `coord` (x for Axis::X) spanning (lo, hi).
bool seam_blocked(const WallEvidence& ev, Axis axis, double coord, double lo, double hi) {
  const double tol = ev.tolerance;
  for (const auto& seg : ev.segments) {
    if (seg.axis != axis || std::abs(seg.offset - coord) >= tol) continue;
    auto it = std::upper_bound(seg.along.begin(), seg.along.end(), lo + tol);
    if (it != seg.along.end() && *it < hi - tol) return true;
  }
  for (const auto& d : ev.doorways) {
    auto p = std::find_if(ev.planes.begin(), ev.planes.end(), [&](const LayoutPlane& q) { return q.id == d.plane_id; });
    if (p == ev.planes.end() || p->axis != axis || std::abs(p->offset - coord) >= tol) continue;
    if (d.lo() < hi && d.hi() > lo) return true;
  }
  return false;
}

bool ranges_overlap(int a0, int a1, int b0, int b1) { return std::max(a0, b0) < std::min(a1, b1); }

enum Dir { East = 0, North = 1, West = 2, South = 3 };
constexpr std::array<std::array<int, 2>, 4> kStep{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

Polygon simplify(const std::vector<std::array<int, 2>>& loop, const OccupancyGrid2D& grid) {
  // Drop vertices where the direction does not change.
  std::vector<std::array<int, 2>> corners;
  const std::size_t n = loop.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& prev = loop[(k + n - 1) % n];
    const auto& cur = loop[k];
    const auto& next = loop[(k + 1) % n];
    const long cross = long(cur[0] - prev[0]) * (next[1] - cur[1]) - long(cur[1] - prev[1]) * (next[0] - cur[0]);
    if (cross != 0) corners.push_back(cur);
  }
  // Canonical start: lowest, then leftmost corner.
  auto start = std::min_element(corners.begin(), corners.end(), [](const auto& a, const auto& b) {
    return std::make_pair(a[1], a[0]) < std::make_pair(b[1], b[0]);
  });
  std::rotate(corners.begin(), start, corners.end());
  Polygon poly;
  poly.reserve(corners.size());
  for (const auto& c : corners)
    poly.emplace_back(grid.origin.x() + c[0] * grid.resolution, grid.origin.y() + c[1] * grid.resolution);
  return poly;
}

}  // namespace

TracedBoundary trace_boundary(const std::vector<int>& cells, const OccupancyGrid2D& grid) {
  TracedBoundary out;
  if (cells.empty()) return out;
  std::vector<char> inside(grid.size(), 0);
  for (int c : cells) inside[std::size_t(c)] = 1;
  auto in = [&](int i, int j) { return i >= 0 && j >= 0 && i < grid.nx && j < grid.ny && inside[std::size_t(grid.index(i, j))]; };

  // Directed boundary edges with the region on their left.
  const long stride = grid.nx + 1;
  auto key = [&](int i, int j) { return long(j) * stride + i; };
  struct Edge {
    int i, j;
    Dir dir;
    bool used = false;
  };
  std::vector<Edge> edges;
  std::map<long, std::vector<std::size_t>> outgoing;
  auto add = [&](int i, int j, Dir d) {
    outgoing[key(i, j)].push_back(edges.size());
    edges.push_back({i, j, d});
  };
  for (int c : cells) {
    const int i = grid.cell_i(c), j = grid.cell_j(c);
    if (!in(i, j - 1)) add(i, j, East);
    if (!in(i + 1, j)) add(i + 1, j, North);
    if (!in(i, j + 1)) add(i + 1, j + 1, West);
    if (!in(i - 1, j)) add(i, j + 1, South);
  }

  for (std::size_t first = 0; first < edges.size(); ++first) {
    if (edges[first].used) continue;
    std::vector<std::array<int, 2>> loop;
    std::size_t e = first;
    while (!edges[e].used) {
      edges[e].used = true;
      loop.push_back({edges[e].i, edges[e].j});
      const int ni = edges[e].i + kStep[edges[e].dir][0], nj = edges[e].j + kStep[edges[e].dir][1];
      // At a pinch vertex prefer the left turn, which keeps loops simple.
      const Dir incoming = edges[e].dir;
      std::size_t next = e;
      int best_rank = 4;
      for (std::size_t cand : outgoing[key(ni, nj)]) {
        if (edges[cand].used && cand != first) continue;
        const int turn = (int(edges[cand].dir) - int(incoming) + 4) % 4;  // 1 left, 0 straight, 3 right
        const int rank = turn == 1 ? 0 : turn == 0 ? 1 : 2;
        if (rank < best_rank) {
          best_rank = rank;
          next = cand;
        }
      }
      if (next == e) break;
      e = next;
    }
    Polygon poly = simplify(loop, grid);
    if (signed_area(poly) > 0) {
      if (out.outer.empty() || signed_area(poly) > signed_area(out.outer)) {
        if (!out.outer.empty()) out.holes.push_back(out.outer);
        out.outer = std::move(poly);
      } else {
        out.holes.push_back(std::move(poly));
      }
    } else {
      out.holes.push_back(std::move(poly));
    }
  }
  return out;
}

std::vector<Region> union_to_regions(const std::vector<CandidateRect>& selected, const OccupancyGrid2D& grid,
                                     const WallEvidence* evidence) {
  const std::size_t m = selected.size();
  DisjointSets sets(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const CellRange& ra = selected[a].cells;
      const CellRange& rb = selected[b].cells;
      if (ra.empty() || rb.empty()) continue;
      const bool ox = ranges_overlap(ra.i0, ra.i1, rb.i0, rb.i1);
      const bool oy = ranges_overlap(ra.j0, ra.j1, rb.j0, rb.j1);
      bool join = ox && oy;
      if (!join && oy && (ra.i1 == rb.i0 || rb.i1 == ra.i0)) {
        const int seam = ra.i1 == rb.i0 ? ra.i1 : rb.i1;
        const double lo = grid.origin.y() + std::max(ra.j0, rb.j0) * grid.resolution;
        const double hi = grid.origin.y() + std::min(ra.j1, rb.j1) * grid.resolution;
        join = !evidence || !seam_blocked(*evidence, Axis::X, grid.origin.x() + seam * grid.resolution, lo, hi);
      } else if (!join && ox && (ra.j1 == rb.j0 || rb.j1 == ra.j0)) {
        const int seam = ra.j1 == rb.j0 ? ra.j1 : rb.j1;
        const double lo = grid.origin.x() + std::max(ra.i0, rb.i0) * grid.resolution;
        const double hi = grid.origin.x() + std::min(ra.i1, rb.i1) * grid.resolution;
        join = !evidence || !seam_blocked(*evidence, Axis::Y, grid.origin.y() + seam * grid.resolution, lo, hi);
      }
      if (join) sets.unite(int(a), int(b));
    }
  }

  // Paint cells with their component root.
  std::vector<int> owner(grid.size(), -1);
  for (std::size_t a = 0; a < m; ++a) {
    const int root = sets.find(int(a));
    const CellRange& r = selected[a].cells;
    for (int j = r.j0; j < r.j1; ++j)
      for (int i = r.i0; i < r.i1; ++i) owner[std::size_t(grid.index(i, j))] = root;
  }
  std::map<int, std::vector<int>> cells_of;
  for (int c = 0; c < int(grid.size()); ++c)
    if (owner[std::size_t(c)] >= 0) cells_of[owner[std::size_t(c)]].push_back(c);

  std::vector<std::pair<int, int>> order;  // (first cell, root)
  for (const auto& [root, cells] : cells_of) order.emplace_back(cells.front(), root);
  std::sort(order.begin(), order.end());

  std::vector<Region> regions;
  for (const auto& [first_cell, root] : order) {
    Region r;
    r.id = int(regions.size());
    r.cells = cells_of[root];
    for (std::size_t a = 0; a < m; ++a)
      if (sets.find(int(a)) == root) r.member_rects.push_back(selected[a].id >= 0 ? selected[a].id : int(a));
    std::sort(r.member_rects.begin(), r.member_rects.end());
    for (int c : r.cells) {
      switch (grid.states[std::size_t(c)]) {
        case CellState::Free: ++r.cell_stats.free; break;
        case CellState::Occupied: ++r.cell_stats.occupied; break;
        case CellState::Unobserved: ++r.cell_stats.unobserved; break;
      }
    }
    TracedBoundary tb = trace_boundary(r.cells, grid);
    r.outer_boundary = std::move(tb.outer);
    r.holes = std::move(tb.holes);
    regions.push_back(std::move(r));
  }
  return regions;
}

RegionSplit filter_regions(const std::vector<Region>& regions, double max_ratio) {
  RegionSplit split;
  for (const auto& r : regions) {
    const bool keep = double(r.cell_stats.total()) <= max_ratio * double(r.cell_stats.free);
    (keep ? split.kept : split.rejected).push_back(r);
  }
  return split;
}

TransitionResult attach_transitions(const std::vector<Region>& regions, const std::vector<Doorway>& doorways,
                                    const std::vector<LayoutPlane>& planes, double tolerance) {
  TransitionResult out;
  for (const auto& d : doorways) {
    auto plane = std::find_if(planes.begin(), planes.end(), [&](const LayoutPlane& p) { return p.id == d.plane_id; });
    if (plane == planes.end()) {
      out.unattached.push_back(d.id);
      continue;
    }
    std::vector<std::pair<double, int>> qualifying;  // (-overlap, region id)
    for (const auto& r : regions) {
      double overlap = 0.0;
      auto scan = [&](const Polygon& poly) {
        for (std::size_t k = 0, n = poly.size(); k < n; ++k) {
          const auto& p = poly[k];
          const auto& q = poly[(k + 1) % n];
          const bool vertical = std::abs(p.x() - q.x()) < 1e-12;
          if (vertical != (plane->axis == Axis::X)) continue;
          const double coord = vertical ? p.x() : p.y();
          if (std::abs(coord - plane->offset) > tolerance) continue;
          const double a = vertical ? std::min(p.y(), q.y()) : std::min(p.x(), q.x());
          const double b = vertical ? std::max(p.y(), q.y()) : std::max(p.x(), q.x());
          overlap += std::max(0.0, std::min(b, d.hi()) - std::max(a, d.lo()));
        }
      };
      scan(r.outer_boundary);
      for (const auto& h : r.holes) scan(h);
      if (overlap >= 0.5 * d.width - 1e-9) qualifying.emplace_back(-overlap, r.id);
    }
    std::sort(qualifying.begin(), qualifying.end());
    if (qualifying.empty()) {
      out.unattached.push_back(d.id);
    } else if (qualifying.size() == 1) {
      out.transitions.push_back({d.id, qualifying[0].second, std::nullopt});
    } else {
      const int a = std::min(qualifying[0].second, qualifying[1].second);
      const int b = std::max(qualifying[0].second, qualifying[1].second);
      out.transitions.push_back({d.id, a, b});
    }
  }
  return out;
}

}  // namespace layout
