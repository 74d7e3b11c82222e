#pragma once

// Batch and online orchestration of the full floor-plan pipeline.

#include "layout/candidates.hpp"
#include "layout/cover.hpp"
#include "layout/doors.hpp"
#include "layout/ingest.hpp"
#include "layout/model.hpp"
#include "layout/semantics.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace layout {

struct PipelineParams {
  double height = 1.0;  ///< slice height, meters
  double z_max = 2.0;   ///< door-height cutoff for segment points
  DoorParams door;
  PruneParams prune;
  double max_ratio = 1000.0;
  ClassifierParams classifier;
  double doorway_merge_gap = 0.3;

  nlohmann::json to_json() const;
};

struct Report {
  std::string scene;
  std::size_t planes = 0;
  std::size_t doorways = 0;
  PruneStats prune;
  std::size_t universe = 0;
  std::size_t uncoverable = 0;
  std::vector<GreedyStep> greedy_steps;
  std::int64_t cover_weight = 0;
  std::size_t regions_before_filter = 0;
  std::vector<CellStats> rejected_regions;
  std::vector<std::string> notes;

  nlohmann::json to_json(const FloorPlan& plan) const;
};

struct BatchResult {
  FloorPlan plan;
  Report report;
  OccupancyGrid2D grid;
};

/// ingest -> doors -> candidates -> cover -> regions -> semantics. Module
/// errors are rethrown with the failing stage named in the message.
BatchResult run_batch(const Scene& scene, const PipelineParams& params = {});

struct Snapshot {
  double time = 0.0;
  BatchResult result;
};

/// Snapshot times: start + k * interval while below the latest observation,
/// then the latest observation itself. Start is the earliest timestamp.
std::vector<double> snapshot_times(const Scene& scene, double interval);

/// Stateless re-runs of the batch pipeline on each observation prefix.
/// Throws InvalidSpec when the scene carries no timestamps.
std::vector<Snapshot> run_online(const Scene& scene, double interval, const PipelineParams& params = {});

/// Ground-truth style helpers used by tests and the CLI report.
double cell_iou(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace layout
