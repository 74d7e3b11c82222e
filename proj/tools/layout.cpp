// layout: floor plans from partial Manhattan-world observations.

#include "layout/candidates.hpp"
#include "layout/error.hpp"
#include "layout/floorplan_io.hpp"
#include "layout/ingest.hpp"
#include "layout/pipeline.hpp"
#include "layout/svg.hpp"
#include "layout/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <cstdlib>
#include <iostream>

namespace {

using layout::PipelineParams;
using nlohmann::json;
namespace fs = std::filesystem;

enum Exit { kOk = 0, kInputError = 2, kPipelineError = 3 };

void configure_logging() {
  spdlog::set_pattern("%^%l%$: %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("LAYOUT_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

struct Thresholds {
  std::optional<double> response_min;
  void add(CLI::App* cmd, PipelineParams& p) {
    cmd->add_option("--height", p.height, "slice height in meters")->capture_default_str();
    cmd->add_option("--z-max", p.z_max, "ignore segment points above this height")->capture_default_str();
    cmd->add_option("--min-door-width", p.door.min_width)->capture_default_str();
    cmd->add_option("--max-door-width", p.door.max_width)->capture_default_str();
    cmd->add_option("--response-min", response_min, "absolute doorway response threshold");
    cmd->add_option("--min-dim", p.prune.min_dim, "minimum candidate side")->capture_default_str();
    cmd->add_option("--erosion", p.prune.erosion)->capture_default_str();
    cmd->add_option("--max-ratio", p.max_ratio, "total/free cell ratio limit")->capture_default_str();
    cmd->add_option("--max-perimeter", p.classifier.max_perimeter)->capture_default_str();
    cmd->add_option("--max-turning-distance", p.classifier.max_turning_distance)->capture_default_str();
  }
  void apply(PipelineParams& p) const {
    if (response_min) p.door.response_min = response_min;
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    layout::write_text(path, text);
}

void log_report(const layout::BatchResult& r) {
  const auto& rep = r.report;
  spdlog::info("{}: {} planes, {} doorways", rep.scene, rep.planes, rep.doorways);
  spdlog::info("candidates {} -> {} (pruned {:.1f}%)", rep.prune.enumerated, rep.prune.survivors,
               100.0 * rep.prune.reduction());
  spdlog::info("universe {} cells, {} uncoverable, greedy {} iterations, weight {}", rep.universe, rep.uncoverable,
               rep.greedy_steps.size(), rep.cover_weight);
  for (std::size_t k = 0; k < r.plan.regions.size(); ++k) {
    const auto& f = r.plan.features[k];
    spdlog::info("region {} {}: area {:.2f} perim {:.2f} turn {:.4f}", r.plan.regions[k].id,
                 layout::to_string(r.plan.regions[k].label), f.area, f.perimeter, f.turning_distance);
  }
  for (const auto& n : rep.notes) spdlog::warn("{}", n);
}

int cmd_build(const std::string& manifest, const std::string& out, const std::string& svg, const std::string& report,
              const PipelineParams& params) {
  const auto scene = layout::load_scene(manifest);
  const auto result = layout::run_batch(scene, params);
  log_report(result);
  emit(out, layout::dump_floorplan(result.plan, params.to_json()));
  if (!svg.empty()) layout::write_text(svg, layout::render_svg(result.plan, result.grid));
  if (!report.empty()) layout::write_text(report, result.report.to_json(result.plan).dump(2) + "\n");
  return kOk;
}

int cmd_online(const std::string& manifest, const std::string& out_dir, double interval, const PipelineParams& params) {
  const auto scene = layout::load_scene(manifest);
  const auto snaps = layout::run_online(scene, interval, params);
  json timeline = json::array();
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%03zu.json", k);
    const auto& plan = snaps[k].result.plan;
    layout::write_text(fs::path(out_dir) / name, layout::dump_floorplan(plan, params.to_json()));
    json regions = json::array();
    for (std::size_t r = 0; r < plan.regions.size(); ++r)
      regions.push_back({{"id", plan.regions[r].id},
                         {"label", layout::to_string(plan.regions[r].label)},
                         {"area", plan.features[r].area}});
    timeline.push_back({{"index", k},
                        {"time", snaps[k].time},
                        {"file", name},
                        {"regions", regions},
                        {"transitions", plan.transitions.size()},
                        {"speculated_free_cells", plan.speculation.speculated_free}});
    spdlog::info("t={:.2f}s: {} regions, {} transitions", snaps[k].time, plan.regions.size(), plan.transitions.size());
  }
  layout::write_text(fs::path(out_dir) / "timeline.json", timeline.dump(2) + "\n");
  return kOk;
}

int cmd_doors(const std::string& manifest, const std::string& out, const PipelineParams& params) {
  const auto scene = layout::load_scene(manifest);
  const auto result = layout::run_batch(scene, params);
  emit(out, layout::format_doorways(result.plan.doorways));
  return kOk;
}

int cmd_candidates(const std::string& manifest, const std::string& out, const PipelineParams& params) {
  const auto scene = layout::load_scene(manifest);
  if (!scene.voxels) throw layout::Error(layout::ErrorKind::SchemaViolation, "candidates need a voxel map");
  const auto doorways = layout::run_batch(scene, params).plan.doorways;
  const auto grid = layout::slice_grid(*scene.voxels, params.height);
  const auto segments = layout::project_segments_2d(scene.clouds, scene.planes, params.z_max);
  layout::PruneStats stats;
  const auto all = layout::enumerate_rects(scene.planes);
  const auto kept = layout::prune_rects(all, segments, doorways, scene.planes, grid, params.prune, &stats);
  json j;
  j["enumerated"] = stats.enumerated;
  j["rejected"] = {{"too_narrow", stats.too_narrow},
                   {"segment_collision", stats.segment_collision},
                   {"doorway_collision", stats.doorway_collision},
                   {"no_free_cells", stats.no_free_cells}};
  j["survivors"] = json::array();
  for (const auto& c : kept)
    j["survivors"].push_back({{"id", c.id},
                              {"planes", c.plane_key()},
                              {"bounds", {c.bounds.xmin, c.bounds.ymin, c.bounds.xmax, c.bounds.ymax}},
                              {"weight", c.weight},
                              {"free_cells", c.covered_free.size()}});
  emit(out, j.dump(2) + "\n");
  spdlog::info("{} candidates, {} survive", stats.enumerated, stats.survivors);
  return kOk;
}

json truth_json(const layout::synth::World& w) {
  json j;
  j["spaces"] = json::array();
  for (std::size_t s = 0; s < w.spec.spaces.size(); ++s) {
    const auto& sp = w.spec.spaces[s];
    j["spaces"].push_back({{"name", sp.name},
                           {"kind", sp.kind == layout::synth::SpaceKind::Room ? "room" : "corridor"},
                           {"cells", w.space_cells[s].size()}});
  }
  j["doors"] = json::array();
  for (const auto& d : w.doors)
    j["doors"].push_back({{"axis", layout::to_string(d.axis)},
                          {"offset_m", d.offset},
                          {"center_m", d.center},
                          {"width_m", d.width},
                          {"between", {w.spec.spaces[std::size_t(d.space_a)].name,
                                       d.space_b < 0 ? std::string("exterior")
                                                     : w.spec.spaces[std::size_t(d.space_b)].name}}});
  j["planes"] = json::array();
  for (const auto& p : w.planes)
    j["planes"].push_back(
        {{"id", p.id}, {"axis", layout::to_string(p.axis)}, {"facing", layout::to_string(p.facing)}, {"offset_m", p.offset}});
  return j;
}

int cmd_synth(const std::string& spec_path, const std::string& fixture, std::optional<std::uint64_t> random_seed,
              bool partial, std::optional<std::uint64_t> seed, const std::string& out_dir, const std::string& encoding) {
  using namespace layout::synth;
  WorldSpec spec;
  if (!spec_path.empty())
    spec = load_world_spec(spec_path);
  else if (!fixture.empty())
    spec = layout::synth::fixture(fixture);
  else if (random_seed)
    spec = random_office(*random_seed, !partial);
  else
    throw layout::Error(layout::ErrorKind::InvalidSpec, "give --spec, --fixture or --random");
  if (seed) spec.seed = *seed;
  const World world = generate_world(spec);
  const layout::Scene scene = observe_world(world);
  const auto enc = encoding == "text" ? layout::SegmentEncoding::Text : layout::SegmentEncoding::Binary;
  const auto manifest = layout::save_scene(scene, out_dir, enc);
  layout::write_text(fs::path(out_dir) / "world.json", to_json(spec).dump(2) + "\n");
  layout::write_text(fs::path(out_dir) / "truth.json", truth_json(world).dump(2) + "\n");
  spdlog::info("wrote {} ({} planes observed of {}, {} poses)", manifest.string(), scene.planes.size(),
               world.planes.size(), scene.trajectory.size());
  std::cout << manifest.string() << "\n";
  return kOk;
}

int cmd_render(const std::string& manifest, const std::string& plan_path, const std::string& svg,
               const PipelineParams& params) {
  const auto scene = layout::load_scene(manifest);
  if (!scene.voxels) throw layout::Error(layout::ErrorKind::SchemaViolation, "render needs a voxel map");
  if (plan_path.empty()) {
    const auto result = layout::run_batch(scene, params);
    emit(svg, layout::render_svg(result.plan, result.grid));
  } else {
    const auto plan = layout::load_floorplan(plan_path);
    emit(svg, layout::render_svg(plan, layout::slice_grid(*scene.voxels, plan.slice_height)));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Floor plans from partial Manhattan-world observations"};
  app.require_subcommand(1);

  PipelineParams params;
  std::string manifest, out, svg, report, plan_path, spec_path, fixture, out_dir, encoding = "binary";
  double interval = 15.0;
  std::optional<std::uint64_t> seed, random_seed;
  bool partial = false;

  Thresholds th_build, th_online, th_doors, th_cands, th_render;

  auto* build = app.add_subcommand("build", "batch floor plan from a scene manifest");
  build->add_option("--manifest", manifest, "scene.json")->required();
  build->add_option("--out", out, "floor-plan file (default stdout)");
  build->add_option("--svg", svg, "also write an SVG rendering");
  build->add_option("--report", report, "write the run report as JSON");
  th_build.add(build, params);

  auto* online = app.add_subcommand("online", "re-run the pipeline on observation prefixes");
  online->add_option("--manifest", manifest)->required();
  online->add_option("--out", out_dir, "output directory")->required();
  online->add_option("--interval", interval, "seconds between snapshots")->capture_default_str();
  th_online.add(online, params);

  auto* doors = app.add_subcommand("doors", "list detected doorways");
  doors->add_option("--manifest", manifest)->required();
  doors->add_option("--out", out);
  th_doors.add(doors, params);

  auto* cands = app.add_subcommand("candidates", "list candidate rectangles surviving pruning");
  cands->add_option("--manifest", manifest)->required();
  cands->add_option("--out", out);
  th_cands.add(cands, params);

  auto* synth = app.add_subcommand("synth", "generate a synthetic scene");
  auto* src = synth->add_option_group("source");
  src->add_option("--spec", spec_path, "world spec JSON");
  src->add_option("--fixture", fixture, "built-in fixture name");
  src->add_option("--random", random_seed, "random office with this seed");
  src->require_option(1);
  synth->add_flag("--partial", partial, "corridor-biased walk for --random");
  synth->add_option("--seed", seed, "override the noise seed");
  synth->add_option("--out", out_dir, "output directory")->required();
  synth->add_option("--encoding", encoding, "segment file encoding")->check(CLI::IsMember({"text", "binary"}));

  auto* render = app.add_subcommand("render", "render a floor plan as SVG");
  render->add_option("--manifest", manifest)->required();
  render->add_option("--plan", plan_path, "floor-plan file; built from the scene when absent");
  render->add_option("--svg", svg, "output SVG (default stdout)");
  th_render.add(render, params);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*build) {
      th_build.apply(params);
      return cmd_build(manifest, out, svg, report, params);
    }
    if (*online) {
      th_online.apply(params);
      return cmd_online(manifest, out_dir, interval, params);
    }
    if (*doors) {
      th_doors.apply(params);
      return cmd_doors(manifest, out, params);
    }
    if (*cands) {
      th_cands.apply(params);
      return cmd_candidates(manifest, out, params);
    }
    if (*synth) return cmd_synth(spec_path, fixture, random_seed, partial, seed, out_dir, encoding);
    if (*render) {
      th_render.apply(params);
      return cmd_render(manifest, plan_path, svg, params);
    }
  } catch (const layout::Error& e) {
    spdlog::error("{}", e.what());
    return e.is_input_error() ? kInputError : kPipelineError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kPipelineError;
  }
  return kOk;
}
