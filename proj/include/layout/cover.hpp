#pragma once

// Weighted set cover of the free-cell universe by candidate rectangles.

#include "layout/model.hpp"

#include <cstdint>
#include <vector>

namespace layout {

struct Universe {
  std::vector<int> cells;        ///< free cells covered by at least one candidate, sorted
  std::vector<int> uncoverable;  ///< free cells no candidate reaches, sorted
};

Universe build_universe(const std::vector<CandidateRect>& candidates, const OccupancyGrid2D& grid);

struct GreedyStep {
  int candidate = 0;  ///< index into the candidate list
  std::int64_t weight = 0;
  std::int64_t newly_covered = 0;
  double ratio() const { return double(weight) / double(newly_covered); }
};

struct CoverResult {
  std::vector<int> selected;  ///< candidate indices, in selection order
  std::vector<GreedyStep> steps;
  std::int64_t total_weight = 0;
};

/// Repeatedly takes the candidate minimising weight / |newly covered|,
/// preferring the larger weight on equal ratio and then the smaller plane
/// key. Ratios are compared by cross-multiplication, so ties are exact.
/// Throws UniverseNotCoverable if some universe cell lies in no candidate.
CoverResult greedy_cover(const std::vector<CandidateRect>& candidates, const std::vector<int>& universe);

/// Exact minimum-weight cover by branch and bound. Throws TooLarge when
/// there are more than `limit` candidates.
CoverResult optimal_cover(const std::vector<CandidateRect>& candidates, const std::vector<int>& universe,
                          std::size_t limit = 20);

/// True when the selected candidates jointly contain every universe cell.
bool is_cover(const std::vector<CandidateRect>& candidates, const std::vector<int>& selected,
              const std::vector<int>& universe);

/// H(n) = 1 + 1/2 + ... + 1/n.
double harmonic(std::int64_t n);

}  // namespace layout
