#include "layout/pipeline.hpp"

#include "layout/error.hpp"
#include "layout/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace layout {

using nlohmann::json;

namespace {

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(name) + ": " + e.detail());
  }
}

std::optional<double> earliest_observation(const Scene& scene) {
  std::optional<double> best;
  auto take = [&](double v) {
    if (std::isfinite(v) && (!best || v < *best)) best = v;
  };
  for (const auto& c : scene.clouds)
    for (double v : c.times) take(v);
  if (scene.timeline) {
    for (double v : scene.timeline->first_free) take(v);
    for (double v : scene.timeline->first_occupied) take(v);
  }
  for (const auto& s : scene.trajectory) take(s.t);
  return best;
}

}  // namespace

json PipelineParams::to_json() const {
  json j;
  j["height_m"] = height;
  j["z_max_m"] = z_max;
  j["door"] = {{"min_width_m", door.min_width},
               {"max_width_m", door.max_width},
               {"width_step_m", door.width_step},
               {"response_min", door.response_min ? json(*door.response_min) : json(nullptr)},
               {"response_fraction", door.response_fraction},
               {"suppression_radius_m", door.suppression_radius},
               {"edge_margin_m", door.edge_margin},
               {"empty_fraction", door.empty_fraction},
               {"sigma_bins", door.sigma_bins},
               {"bin_width_m", door.bin_width},
               {"merge_gap_m", doorway_merge_gap}};
  j["prune"] = {{"min_dim_m", prune.min_dim}, {"erosion_m", prune.erosion}};
  j["max_ratio"] = max_ratio;
  j["classifier"] = {{"max_perimeter_m", classifier.max_perimeter},
                     {"max_turning_distance", classifier.max_turning_distance}};
  return j;
}

json Report::to_json(const FloorPlan& plan) const {
  json j;
  j["scene"] = scene;
  j["planes"] = planes;
  j["doorways"] = doorways;
  j["candidates"] = {{"enumerated", prune.enumerated},
                     {"too_narrow", prune.too_narrow},
                     {"segment_collision", prune.segment_collision},
                     {"doorway_collision", prune.doorway_collision},
                     {"no_free_cells", prune.no_free_cells},
                     {"survivors", prune.survivors},
                     {"pruning_fraction", prune.reduction()}};
  j["universe_cells"] = universe;
  j["uncoverable_cells"] = uncoverable;
  json steps = json::array();
  for (const auto& s : greedy_steps)
    steps.push_back({{"candidate", s.candidate}, {"weight", s.weight}, {"newly_covered", s.newly_covered},
                     {"ratio", s.ratio()}});
  j["greedy"] = {{"iterations", greedy_steps.size()}, {"total_weight", cover_weight}, {"steps", steps}};
  j["regions_before_filter"] = regions_before_filter;
  json rejected = json::array();
  for (const auto& c : rejected_regions)
    rejected.push_back({{"free", c.free}, {"occupied", c.occupied}, {"unobserved", c.unobserved}});
  j["rejected_regions"] = rejected;
  json regions = json::array();
  for (std::size_t k = 0; k < plan.regions.size(); ++k) {
    const auto& f = k < plan.features.size() ? plan.features[k] : RegionFeatures{};
    regions.push_back({{"id", plan.regions[k].id},
                       {"label", to_string(plan.regions[k].label)},
                       {"area", f.area},
                       {"perimeter", f.perimeter},
                       {"aspect_ratio", f.aspect_ratio},
                       {"turning_distance", f.turning_distance}});
  }
  j["regions"] = regions;
  j["speculated_free_cells"] = plan.speculation.speculated_free;
  j["notes"] = notes;
  return j;
}

BatchResult run_batch(const Scene& scene, const PipelineParams& params) {
  BatchResult out;
  FloorPlan& plan = out.plan;
  Report& report = out.report;
  plan.provenance = scene.name;
  plan.observed_until = latest_observation(scene);
  plan.slice_height = params.height;
  plan.planes = scene.planes;
  report.scene = scene.name;
  report.planes = scene.planes.size();
  if (scene.planes.empty()) report.notes.push_back("scene has no planes");

  // Doorways, one detector run per plane, then merged across wall faces.
  plan.doorways = stage("doors", [&] {
    std::vector<Doorway> found;
    DoorParams dp = params.door;
    dp.z_max = params.z_max;
    for (const auto& cloud : scene.clouds) {
      const LayoutPlane* plane = scene.find_plane(cloud.plane_id);
      if (!plane) continue;
      for (auto d : detect_plane_doorways(cloud, *plane, dp)) {
        d.id = int(found.size());
        found.push_back(d);
      }
    }
    return merge_coincident_doorways(found, scene.planes, params.doorway_merge_gap);
  });
  report.doorways = plan.doorways.size();

  if (!scene.voxels) {
    report.notes.push_back("scene has no voxel map; no regions built");
    plan.unattached_doorways.reserve(plan.doorways.size());
    for (const auto& d : plan.doorways) plan.unattached_doorways.push_back(d.id);
    return out;
  }
  out.grid = stage("ingest", [&] { return slice_grid(*scene.voxels, params.height); });
  const OccupancyGrid2D& grid = out.grid;

  const auto segments = project_segments_2d(scene.clouds, scene.planes, params.z_max);
  const auto survivors = stage("candidates", [&] {
    return prune_rects(enumerate_rects(scene.planes), segments, plan.doorways, scene.planes, grid, params.prune,
                       &report.prune);
  });

  const Universe universe = build_universe(survivors, grid);
  report.universe = universe.cells.size();
  report.uncoverable = universe.uncoverable.size();
  if (universe.cells.empty()) {
    report.notes.push_back("no coverable free cells");
    for (const auto& d : plan.doorways) plan.unattached_doorways.push_back(d.id);
    return out;
  }
  const CoverResult cover = stage("cover", [&] { return greedy_cover(survivors, universe.cells); });
  report.greedy_steps = cover.steps;
  report.cover_weight = cover.total_weight;

  std::vector<CandidateRect> selected;
  for (int c : cover.selected) selected.push_back(survivors[std::size_t(c)]);
  WallEvidence evidence{segments, plan.doorways, scene.planes, params.prune.erosion};
  auto regions = stage("regions", [&] { return union_to_regions(selected, grid, &evidence); });
  report.regions_before_filter = regions.size();
  RegionSplit split = filter_regions(regions, params.max_ratio);
  for (const auto& r : split.rejected) report.rejected_regions.push_back(r.cell_stats);

  stage("semantics", [&] {
    for (std::size_t k = 0; k < split.kept.size(); ++k) {
      Region& r = split.kept[k];
      r.id = int(k);
      plan.features.push_back(region_features(r));
      r.label = classify(plan.features.back().perimeter, plan.features.back().turning_distance, params.classifier);
    }
    return 0;
  });
  plan.regions = std::move(split.kept);

  const TransitionResult tr = attach_transitions(plan.regions, plan.doorways, scene.planes, grid.resolution);
  plan.transitions = tr.transitions;
  plan.unattached_doorways = tr.unattached;

  for (const auto& r : plan.regions) {
    plan.speculation.cells_in_plan += r.cell_stats.total();
    plan.speculation.known_free += r.cell_stats.free;
    plan.speculation.occupied += r.cell_stats.occupied;
  }
  plan.speculation.speculated_free =
      plan.speculation.cells_in_plan - plan.speculation.known_free - plan.speculation.occupied;
  return out;
}

std::vector<double> snapshot_times(const Scene& scene, double interval) {
  const auto first = earliest_observation(scene);
  const auto last = latest_observation(scene);
  std::vector<double> times;
  if (!first || !last) return times;
  if (interval > 0.0)
    for (int k = 1;; ++k) {
      const double t = *first + k * interval;
      if (t >= *last) break;
      times.push_back(t);
    }
  times.push_back(*last);
  return times;
}

std::vector<Snapshot> run_online(const Scene& scene, double interval, const PipelineParams& params) {
  if (!scene.timestamped()) throw Error(ErrorKind::InvalidSpec, "online mode needs timestamped observations");
  if (!(interval > 0.0)) throw Error(ErrorKind::InvalidSpec, "interval must be positive");
  std::vector<Snapshot> out;
  for (double t : snapshot_times(scene, interval)) out.push_back({t, run_batch(scene_until(scene, t), params)});
  return out;
}

double cell_iou(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::vector<int> inter;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(inter));
  const double uni = double(sa.size() + sb.size() - inter.size());
  return uni == 0.0 ? 1.0 : double(inter.size()) / uni;
}

}  // namespace layout
