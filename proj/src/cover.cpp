#include "layout/cover.hpp"

#include "layout/error.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <unordered_map>

namespace layout {

namespace {

// Maps universe cells to dense positions [0, n).
class CellIndex {
 public:
  explicit CellIndex(const std::vector<int>& universe) {
    pos_.reserve(universe.size());
    for (std::size_t i = 0; i < universe.size(); ++i) pos_.emplace(universe[i], int(i));
  }
  int operator()(int cell) const {
    auto it = pos_.find(cell);
    return it == pos_.end() ? -1 : it->second;
  }

 private:
  std::unordered_map<int, int> pos_;
};

std::vector<std::vector<int>> restrict_to_universe(const std::vector<CandidateRect>& candidates,
                                                   const CellIndex& index) {
  std::vector<std::vector<int>> sets(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c)
    for (int cell : candidates[c].covered_free)
      if (int p = index(cell); p >= 0) sets[c].push_back(p);
  return sets;
}

void require_coverable(const std::vector<std::vector<int>>& sets, std::size_t n) {
  std::vector<char> reached(n, 0);
  for (const auto& s : sets)
    for (int p : s) reached[std::size_t(p)] = 1;
  const auto missing = std::count(reached.begin(), reached.end(), 0);
  if (missing > 0)
    throw Error(ErrorKind::UniverseNotCoverable, std::to_string(missing) + " universe cell(s) lie in no candidate");
}

}  // namespace

Universe build_universe(const std::vector<CandidateRect>& candidates, const OccupancyGrid2D& grid) {
  std::vector<char> covered(grid.size(), 0);
  for (const auto& c : candidates)
    for (int cell : c.covered_free) covered[std::size_t(cell)] = 1;
  Universe u;
  for (int i = 0; i < int(grid.size()); ++i) {
    if (grid.states[std::size_t(i)] != CellState::Free) continue;
    (covered[std::size_t(i)] ? u.cells : u.uncoverable).push_back(i);
  }
  return u;
}

CoverResult greedy_cover(const std::vector<CandidateRect>& candidates, const std::vector<int>& universe) {
  const CellIndex index(universe);
  const auto sets = restrict_to_universe(candidates, index);
  require_coverable(sets, universe.size());

  // cell -> candidates containing it, for incremental count updates
  std::vector<std::vector<int>> containing(universe.size());
  std::vector<std::int64_t> remaining(candidates.size());
  for (std::size_t c = 0; c < sets.size(); ++c) {
    remaining[c] = std::int64_t(sets[c].size());
    for (int p : sets[c]) containing[std::size_t(p)].push_back(int(c));
  }

  // Strict weak order: smaller ratio first, then larger weight, then smaller
  // plane key, then smaller index.
  auto better = [&](int a, std::int64_t count_a, int b, std::int64_t count_b) {
    const std::int64_t wa = candidates[std::size_t(a)].weight, wb = candidates[std::size_t(b)].weight;
    const __int128 lhs = __int128(wa) * count_b, rhs = __int128(wb) * count_a;
    if (lhs != rhs) return lhs < rhs;
    if (wa != wb) return wa > wb;
    const auto ka = candidates[std::size_t(a)].plane_key(), kb = candidates[std::size_t(b)].plane_key();
    if (ka != kb) return ka < kb;
    return a < b;
  };
  struct Entry {
    int candidate;
    std::int64_t count;
  };
  auto worse = [&](const Entry& x, const Entry& y) { return better(y.candidate, y.count, x.candidate, x.count); };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (std::size_t c = 0; c < candidates.size(); ++c)
    if (remaining[c] > 0) heap.push({int(c), remaining[c]});

  CoverResult result;
  std::vector<char> covered(universe.size(), 0);
  std::size_t left = universe.size();
  while (left > 0 && !heap.empty()) {
    const Entry top = heap.top();
    heap.pop();
    const std::int64_t now = remaining[std::size_t(top.candidate)];
    if (now == 0) continue;
    // Counts only shrink, so a stale entry is an optimistic bound; re-queue it.
    if (now != top.count) {
      heap.push({top.candidate, now});
      continue;
    }
    const auto& cand = candidates[std::size_t(top.candidate)];
    result.selected.push_back(top.candidate);
    result.steps.push_back({top.candidate, cand.weight, now});
    result.total_weight += cand.weight;
    for (int p : sets[std::size_t(top.candidate)]) {
      if (covered[std::size_t(p)]) continue;
      covered[std::size_t(p)] = 1;
      --left;
      for (int c : containing[std::size_t(p)]) --remaining[std::size_t(c)];
    }
  }
  return result;
}

CoverResult optimal_cover(const std::vector<CandidateRect>& candidates, const std::vector<int>& universe,
                          std::size_t limit) {
  if (candidates.size() > limit)
    throw Error(ErrorKind::TooLarge, std::to_string(candidates.size()) + " candidates exceed the exhaustive limit of " +
                                         std::to_string(limit));
  const CellIndex index(universe);
  const auto sets = restrict_to_universe(candidates, index);
  require_coverable(sets, universe.size());

  const std::size_t n = universe.size();
  std::vector<std::vector<int>> containing(n);
  for (std::size_t c = 0; c < sets.size(); ++c)
    for (int p : sets[c]) containing[std::size_t(p)].push_back(int(c));
  for (auto& list : containing)
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      return std::make_pair(candidates[std::size_t(a)].weight, a) < std::make_pair(candidates[std::size_t(b)].weight, b);
    });

  std::vector<int> cover_count(n, 0);
  std::vector<int> chosen, best;
  std::int64_t best_weight = std::numeric_limits<std::int64_t>::max();

  // Branch on the first uncovered cell: some candidate containing it must be chosen.
  auto search = [&](auto&& self, std::size_t from, std::int64_t weight) -> void {
    if (weight >= best_weight) return;
    while (from < n && cover_count[from] > 0) ++from;
    if (from == n) {
      best_weight = weight;
      best = chosen;
      return;
    }
    for (int c : containing[from]) {
      const std::int64_t w = candidates[std::size_t(c)].weight;
      if (weight + w >= best_weight) continue;
      chosen.push_back(c);
      for (int p : sets[std::size_t(c)]) ++cover_count[std::size_t(p)];
      self(self, from + 1, weight + w);
      for (int p : sets[std::size_t(c)]) --cover_count[std::size_t(p)];
      chosen.pop_back();
    }
  };
  search(search, 0, 0);

  CoverResult result;
  if (n == 0) return result;
  std::sort(best.begin(), best.end());
  result.selected = best;
  result.total_weight = best_weight;
  for (int c : best) result.steps.push_back({c, candidates[std::size_t(c)].weight, 0});
  return result;
}

bool is_cover(const std::vector<CandidateRect>& candidates, const std::vector<int>& selected,
              const std::vector<int>& universe) {
  std::vector<int> cells;
  for (int c : selected)
    cells.insert(cells.end(), candidates[std::size_t(c)].covered_free.begin(),
                 candidates[std::size_t(c)].covered_free.end());
  std::sort(cells.begin(), cells.end());
  return std::all_of(universe.begin(), universe.end(),
                     [&](int u) { return std::binary_search(cells.begin(), cells.end(), u); });
}

double harmonic(std::int64_t n) {
  double h = 0.0;
  for (std::int64_t k = 1; k <= n; ++k) h += 1.0 / double(k);
  return h;
}

}  // namespace layout
