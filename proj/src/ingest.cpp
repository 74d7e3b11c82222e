#include "layout/ingest.hpp"

#include "layout/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace layout {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

constexpr char kManifestFormat[] = "layout-scene/1";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::MissingFile, "cannot write " + path.string());
  out.write(bytes.data(), std::streamsize(bytes.size()));
}

std::vector<double> decode_doubles(const std::string& bytes, const fs::path& path) {
  if (bytes.size() % sizeof(double) != 0)
    throw Error(ErrorKind::SchemaViolation, path.string() + ": size is not a multiple of 8 bytes");
  std::vector<double> out(bytes.size() / sizeof(double));
  std::memcpy(out.data(), bytes.data(), bytes.size());
  return out;
}

std::string encode_doubles(const std::vector<double>& values) {
  std::string out(values.size() * sizeof(double), '\0');
  std::memcpy(out.data(), values.data(), out.size());
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void read_segments(SegmentCloud& cloud, const fs::path& path, const std::optional<fs::path>& times_path) {
  const std::string bytes = read_file(path);
  if (path.extension() == ".bin") {
    const auto values = decode_doubles(bytes, path);
    if (values.size() % 3 != 0)
      throw Error(ErrorKind::SchemaViolation, path.string() + ": expected x y z triplets");
    cloud.points.reserve(values.size() / 3);
    for (std::size_t i = 0; i < values.size(); i += 3)
      cloud.points.emplace_back(values[i], values[i + 1], values[i + 2]);
  } else {
    std::istringstream in(bytes);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream row(line);
      std::vector<double> cols;
      double v;
      while (row >> v) cols.push_back(v);
      if (!row.eof() || (cols.size() != 3 && cols.size() != 4))
        throw Error(ErrorKind::SchemaViolation,
                    path.string() + ":" + std::to_string(lineno) + ": expected 'x y z [t]'");
      cloud.points.emplace_back(cols[0], cols[1], cols[2]);
      if (cols.size() == 4) cloud.times.push_back(cols[3]);
    }
    if (!cloud.times.empty() && cloud.times.size() != cloud.points.size())
      throw Error(ErrorKind::SchemaViolation, path.string() + ": timestamps on some rows only");
  }
  if (times_path) {
    cloud.times = decode_doubles(read_file(*times_path), *times_path);
    if (cloud.times.size() != cloud.points.size())
      throw Error(ErrorKind::SchemaViolation, times_path->string() + ": one timestamp per point expected");
  }
}

VoxelGrid read_voxels(const fs::path& path) {
  const std::string bytes = read_file(path);
  const auto eol = bytes.find('\n');
  if (eol == std::string::npos) throw Error(ErrorKind::SchemaViolation, path.string() + ": missing header");
  std::istringstream header(bytes.substr(0, eol));
  std::string magic;
  int version = 0;
  VoxelGrid g;
  header >> magic >> version >> g.origin.x() >> g.origin.y() >> g.origin.z() >> g.resolution >> g.dims[0] >>
      g.dims[1] >> g.dims[2];
  if (!header || magic != "LVOX" || version != 1)
    throw Error(ErrorKind::SchemaViolation, path.string() + ": bad voxel header");
  if (g.dims[0] < 1 || g.dims[1] < 1 || g.dims[2] < 1 || !(g.resolution > 0))
    throw Error(ErrorKind::InvariantViolation, path.string() + ": voxel dims/resolution out of range");
  const std::size_t body = bytes.size() - eol - 1;
  if (body != g.size())
    throw Error(ErrorKind::SchemaViolation, path.string() + ": body has " + std::to_string(body) +
                                                " bytes, header implies " + std::to_string(g.size()));
  g.states.resize(body);
  for (std::size_t i = 0; i < body; ++i) {
    const auto b = static_cast<unsigned char>(bytes[eol + 1 + i]);
    if (b > 2) throw Error(ErrorKind::SchemaViolation, path.string() + ": voxel byte out of range");
    g.states[i] = static_cast<CellState>(b);
  }
  return g;
}

std::string encode_voxels(const VoxelGrid& g) {
  std::string out = "LVOX 1 " + format_double(g.origin.x()) + " " + format_double(g.origin.y()) + " " +
                    format_double(g.origin.z()) + " " + format_double(g.resolution) + " " +
                    std::to_string(g.dims[0]) + " " + std::to_string(g.dims[1]) + " " +
                    std::to_string(g.dims[2]) + "\n";
  out.reserve(out.size() + g.states.size());
  for (auto s : g.states) out.push_back(static_cast<char>(s));
  return out;
}

VoxelTimeline read_timeline(const fs::path& path, std::size_t expected) {
  const std::string bytes = read_file(path);
  const auto eol = bytes.find('\n');
  std::istringstream header(bytes.substr(0, eol == std::string::npos ? 0 : eol));
  std::string magic;
  int version = 0;
  std::size_t n = 0;
  header >> magic >> version >> n;
  if (eol == std::string::npos || !header || magic != "LVXT" || version != 1)
    throw Error(ErrorKind::SchemaViolation, path.string() + ": bad timeline header");
  if (n != expected)
    throw Error(ErrorKind::SchemaViolation, path.string() + ": timeline size does not match voxel grid");
  const auto values = decode_doubles(bytes.substr(eol + 1), path);
  if (values.size() != 2 * n) throw Error(ErrorKind::SchemaViolation, path.string() + ": truncated timeline");
  VoxelTimeline tl;
  tl.first_free.assign(values.begin(), values.begin() + std::ptrdiff_t(n));
  tl.first_occupied.assign(values.begin() + std::ptrdiff_t(n), values.end());
  return tl;
}

std::string encode_timeline(const VoxelTimeline& tl) {
  std::vector<double> values(tl.first_free);
  values.insert(values.end(), tl.first_occupied.begin(), tl.first_occupied.end());
  return "LVXT 1 " + std::to_string(tl.first_free.size()) + "\n" + encode_doubles(values);
}

std::vector<TrajectorySample> read_trajectory(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<TrajectorySample> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    TrajectorySample s;
    if (!(row >> s.t >> s.position.x() >> s.position.y() >> s.position.z()))
      throw Error(ErrorKind::SchemaViolation, path.string() + ":" + std::to_string(lineno) + ": expected 't x y z'");
    out.push_back(s);
  }
  return out;
}

Axis parse_axis(const json& j, int id) {
  const auto s = j.get<std::string>();
  if (s == "x" || s == "X") return Axis::X;
  if (s == "y" || s == "Y") return Axis::Y;
  throw Error(ErrorKind::SchemaViolation, "plane " + std::to_string(id) + ": axis must be 'x' or 'y'");
}

Facing parse_facing(const json& j, int id) {
  const auto s = j.get<std::string>();
  if (s == "+" || s == "positive") return Facing::Positive;
  if (s == "-" || s == "negative") return Facing::Negative;
  throw Error(ErrorKind::SchemaViolation, "plane " + std::to_string(id) + ": facing must be '+' or '-'");
}

}  // namespace

const LayoutPlane* Scene::find_plane(int id) const {
  for (const auto& p : planes)
    if (p.id == id) return &p;
  return nullptr;
}

bool Scene::timestamped() const {
  return std::any_of(clouds.begin(), clouds.end(), [](const SegmentCloud& c) { return !c.times.empty(); }) ||
         timeline.has_value();
}

Scene load_scene(const fs::path& manifest) {
  json doc;
  try {
    doc = json::parse(read_file(manifest));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaViolation, manifest.string() + ": " + e.what());
  }
  const fs::path base = manifest.parent_path();
  Scene scene;
  try {
    if (doc.value("format", std::string(kManifestFormat)) != kManifestFormat)
      throw Error(ErrorKind::SchemaViolation, manifest.string() + ": unsupported format");
    scene.name = doc.value("name", manifest.stem().string());
    for (const auto& jp : doc.value("planes", json::array())) {
      LayoutPlane p;
      p.id = jp.at("id").get<int>();
      p.axis = parse_axis(jp.at("axis"), p.id);
      p.facing = parse_facing(jp.at("facing"), p.id);
      p.offset = jp.at("offset_m").get<double>();
      if (!std::isfinite(p.offset))
        throw Error(ErrorKind::InvariantViolation, "plane " + std::to_string(p.id) + ": offset not finite");
      scene.planes.push_back(p);
      if (jp.contains("segments")) {
        SegmentCloud cloud;
        cloud.plane_id = p.id;
        std::optional<fs::path> times;
        if (jp.contains("segment_times")) times = base / jp["segment_times"].get<std::string>();
        read_segments(cloud, base / jp["segments"].get<std::string>(), times);
        scene.clouds.push_back(std::move(cloud));
      }
    }
    if (doc.contains("voxels")) scene.voxels = read_voxels(base / doc["voxels"].get<std::string>());
    if (doc.contains("voxel_timeline")) {
      if (!scene.voxels) throw Error(ErrorKind::SchemaViolation, "voxel_timeline given without voxels");
      scene.timeline = read_timeline(base / doc["voxel_timeline"].get<std::string>(), scene.voxels->size());
    }
    if (doc.contains("trajectory")) scene.trajectory = read_trajectory(base / doc["trajectory"].get<std::string>());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaViolation, manifest.string() + ": " + e.what());
  }
  validate_scene(scene);
  return scene;
}

fs::path save_scene(const Scene& scene, const fs::path& dir, SegmentEncoding encoding) {
  fs::create_directories(dir);
  json doc;
  doc["format"] = kManifestFormat;
  doc["name"] = scene.name;
  doc["planes"] = json::array();
  std::map<int, const SegmentCloud*> clouds;
  for (const auto& c : scene.clouds) clouds[c.plane_id] = &c;
  for (const auto& p : scene.planes) {
    json jp{{"id", p.id}, {"axis", to_string(p.axis)}, {"facing", to_string(p.facing)}, {"offset_m", p.offset}};
    if (auto it = clouds.find(p.id); it != clouds.end()) {
      const SegmentCloud& c = *it->second;
      const std::string stem = "segments/plane_" + std::to_string(p.id);
      if (encoding == SegmentEncoding::Binary) {
        std::vector<double> flat;
        flat.reserve(c.points.size() * 3);
        for (const auto& q : c.points) flat.insert(flat.end(), {q.x(), q.y(), q.z()});
        write_file(dir / (stem + ".bin"), encode_doubles(flat));
        jp["segments"] = stem + ".bin";
        if (!c.times.empty()) {
          write_file(dir / (stem + ".t.bin"), encode_doubles(c.times));
          jp["segment_times"] = stem + ".t.bin";
        }
      } else {
        std::string text;
        for (std::size_t i = 0; i < c.points.size(); ++i) {
          const auto& q = c.points[i];
          text += format_double(q.x()) + " " + format_double(q.y()) + " " + format_double(q.z());
          if (!c.times.empty()) text += " " + format_double(c.times[i]);
          text += "\n";
        }
        write_file(dir / (stem + ".xyz"), text);
        jp["segments"] = stem + ".xyz";
      }
    }
    doc["planes"].push_back(jp);
  }
  if (scene.voxels) {
    write_file(dir / "voxels.lvox", encode_voxels(*scene.voxels));
    doc["voxels"] = "voxels.lvox";
  }
  if (scene.timeline) {
    write_file(dir / "voxels.lvxt", encode_timeline(*scene.timeline));
    doc["voxel_timeline"] = "voxels.lvxt";
  }
  if (!scene.trajectory.empty()) {
    std::string text = "# t x y z\n";
    for (const auto& s : scene.trajectory)
      text += format_double(s.t) + " " + format_double(s.position.x()) + " " + format_double(s.position.y()) +
              " " + format_double(s.position.z()) + "\n";
    write_file(dir / "trajectory.txt", text);
    doc["trajectory"] = "trajectory.txt";
  }
  const fs::path manifest = dir / "scene.json";
  write_file(manifest, doc.dump(2) + "\n");
  return manifest;
}

void validate_scene(const Scene& scene, double assoc_tol) {
  std::set<int> ids;
  for (const auto& p : scene.planes)
    if (!ids.insert(p.id).second)
      throw Error(ErrorKind::InvariantViolation, "duplicate plane id " + std::to_string(p.id));

  std::string report;
  for (const auto& c : scene.clouds) {
    const LayoutPlane* plane = scene.find_plane(c.plane_id);
    if (!plane)
      throw Error(ErrorKind::InvariantViolation,
                  "segment cloud references unknown plane " + std::to_string(c.plane_id));
    std::size_t bad = 0;
    double worst = 0.0;
    for (const auto& q : c.points) {
      const double d = std::abs(across_plane(plane->axis, q) - plane->offset);
      if (!(d <= assoc_tol)) {
        ++bad;
        worst = std::max(worst, d);
      }
    }
    if (bad > 0) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%splane %d: %zu point(s) farther than %.3g m (worst %.3g m)",
                    report.empty() ? "" : "; ", c.plane_id, bad, assoc_tol, worst);
      report += buf;
    }
  }
  if (!report.empty()) throw Error(ErrorKind::InvariantViolation, report);
  if (scene.voxels) scene.voxels->validate();
  if (scene.timeline && scene.voxels &&
      (scene.timeline->first_free.size() != scene.voxels->size() ||
       scene.timeline->first_occupied.size() != scene.voxels->size()))
    throw Error(ErrorKind::InvariantViolation, "voxel timeline size does not match grid");
}

OccupancyGrid2D slice_grid(const VoxelGrid& grid, double h) {
  const double top = grid.origin.z() + grid.dims[2] * grid.resolution;
  if (!(h >= grid.origin.z() && h < top)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "h = %g outside [%g, %g)", h, grid.origin.z(), top);
    throw Error(ErrorKind::HeightOutOfRange, buf);
  }
  // The epsilon keeps heights that sit on a layer boundary from rounding down a layer.
  const int k = std::min(int(std::floor((h - grid.origin.z()) / grid.resolution + 1e-9)), grid.dims[2] - 1);
  OccupancyGrid2D out;
  out.origin = grid.origin.head<2>();
  out.resolution = grid.resolution;
  out.nx = grid.dims[0];
  out.ny = grid.dims[1];
  out.slice_height = h;
  const auto layer = std::size_t(k) * out.size();
  out.states.assign(grid.states.begin() + std::ptrdiff_t(layer),
                    grid.states.begin() + std::ptrdiff_t(layer + out.size()));
  return out;
}

std::vector<ProjectedSegment> project_segments_2d(const std::vector<SegmentCloud>& clouds,
                                                  const std::vector<LayoutPlane>& planes, double z_max) {
  std::vector<ProjectedSegment> out;
  for (const auto& c : clouds) {
    auto it = std::find_if(planes.begin(), planes.end(), [&](const LayoutPlane& p) { return p.id == c.plane_id; });
    if (it == planes.end()) continue;
    ProjectedSegment seg{c.plane_id, it->axis, it->offset, {}};
    for (const auto& q : c.points)
      if (q.z() <= z_max) seg.along.push_back(along_plane(it->axis, q));
    std::sort(seg.along.begin(), seg.along.end());
    out.push_back(std::move(seg));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.plane_id < b.plane_id; });
  return out;
}

VoxelGrid voxels_at(const VoxelGrid& final_grid, const VoxelTimeline& timeline, double t) {
  VoxelGrid g = final_grid;
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    if (timeline.first_occupied[i] <= t)
      g.states[i] = CellState::Occupied;
    else if (timeline.first_free[i] <= t)
      g.states[i] = CellState::Free;
    else
      g.states[i] = CellState::Unobserved;
  }
  return g;
}

Scene scene_until(const Scene& scene, double t) {
  if (auto last = latest_observation(scene); !last || t >= *last) return scene;
  Scene out;
  out.name = scene.name;
  const bool timed = scene.timestamped();
  std::set<int> active;
  for (const auto& c : scene.clouds) {
    SegmentCloud kept;
    kept.plane_id = c.plane_id;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      if (!c.times.empty() && c.times[i] > t) continue;
      kept.points.push_back(c.points[i]);
      if (!c.times.empty()) kept.times.push_back(c.times[i]);
    }
    if (!kept.points.empty()) {
      active.insert(c.plane_id);
      out.clouds.push_back(std::move(kept));
    }
  }
  for (const auto& p : scene.planes)
    if (!timed || active.count(p.id)) out.planes.push_back(p);
  if (scene.voxels) {
    if (scene.timeline) {
      out.voxels = voxels_at(*scene.voxels, *scene.timeline, t);
      out.timeline = scene.timeline;
    } else {
      out.voxels = scene.voxels;
    }
  }
  for (const auto& s : scene.trajectory)
    if (s.t <= t) out.trajectory.push_back(s);
  return out;
}

std::optional<double> latest_observation(const Scene& scene) {
  std::optional<double> best;
  auto take = [&](double v) {
    if (std::isfinite(v) && (!best || v > *best)) best = v;
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

}  // namespace layout
