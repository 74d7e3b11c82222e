#include "layout/synth.hpp"

#include "layout/error.hpp"
#include "layout/regions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace layout::synth {

using nlohmann::json;

namespace {

constexpr double kEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

double truncated_normal(std::mt19937_64& rng, double sigma) {
  if (sigma <= 0.0) return 0.0;
  std::normal_distribution<double> dist(0.0, sigma);
  for (;;) {
    const double v = dist(rng);
    if (std::abs(v) <= 3.0 * sigma) return v;
  }
}

double uniform01(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

bool interiors_overlap(const Bounds& a, const Bounds& b) {
  return std::max(a.xmin, b.xmin) < std::min(a.xmax, b.xmax) - kEps &&
         std::max(a.ymin, b.ymin) < std::min(a.ymax, b.ymax) - kEps;
}

bool on_lattice(double v, double origin, double res) {
  const double k = (v - origin) / res;
  return std::abs(k - std::round(k)) < 1e-6;
}

// Snaps a lattice coordinate back to the exact spec value it came from.
double snap(double v, const std::vector<double>& values, double res) {
  for (double s : values)
    if (std::abs(s - v) < 0.5 * res) return s;
  return v;
}

int find_space(const WorldSpec& spec, const std::string& name) {
  for (std::size_t i = 0; i < spec.spaces.size(); ++i)
    if (spec.spaces[i].name == name) return int(i);
  return -1;
}

Eigen::Vector2d read_xy(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::SchemaViolation, "waypoint must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

WorldSpec parse_world_spec(const json& j) {
  WorldSpec s;
  try {
    s.name = j.value("name", s.name);
    for (const auto& js : j.at("spaces")) {
      SpaceSpec sp;
      sp.name = js.at("name").get<std::string>();
      const std::string kind = js.value("kind", "room");
      if (kind == "room")
        sp.kind = SpaceKind::Room;
      else if (kind == "corridor")
        sp.kind = SpaceKind::Corridor;
      else
        throw Error(ErrorKind::SchemaViolation, "space '" + sp.name + "': unknown kind '" + kind + "'");
      for (const auto& r : js.at("rects")) {
        if (!r.is_array() || r.size() != 4)
          throw Error(ErrorKind::SchemaViolation, "space '" + sp.name + "': rect must be [xmin, ymin, xmax, ymax]");
        sp.rects.push_back({r[0].get<double>(), r[2].get<double>(), r[1].get<double>(), r[3].get<double>()});
      }
      s.spaces.push_back(std::move(sp));
    }
    for (const auto& jd : j.value("doors", json::array())) {
      DoorSpec d;
      const auto& between = jd.at("between");
      if (!between.is_array() || between.size() != 2)
        throw Error(ErrorKind::SchemaViolation, "door 'between' must name two spaces");
      d.a = between[0].get<std::string>();
      d.b = between[1].get<std::string>();
      d.center = jd.at("center").get<double>();
      d.width = jd.value("width", 1.0);
      if (jd.contains("axis")) {
        const std::string ax = jd["axis"].get<std::string>();
        if (ax != "x" && ax != "y") throw Error(ErrorKind::SchemaViolation, "door axis must be \"x\" or \"y\"");
        d.axis = ax == "x" ? Axis::X : Axis::Y;
      }
      if (jd.contains("offset")) d.offset = jd["offset"].get<double>();
      s.doors.push_back(std::move(d));
    }
    if (j.contains("trajectory")) {
      const auto& jt = j["trajectory"];
      for (const auto& w : jt.at("waypoints")) s.waypoints.push_back(read_xy(w));
      s.step = jt.value("step", s.step);
      s.speed = jt.value("speed", s.speed);
    }
    s.noise = j.value("noise", s.noise);
    s.dropout = j.value("dropout", s.dropout);
    s.margin = j.value("margin", s.margin);
    s.resolution = j.value("resolution", s.resolution);
    s.wall_height = j.value("wall_height", s.wall_height);
    s.door_height = j.value("door_height", s.door_height);
    s.sensor_height = j.value("sensor_height", s.sensor_height);
    if (j.contains("sensor")) {
      const auto& js = j["sensor"];
      s.azimuths = js.value("azimuths", s.azimuths);
      s.elevations = js.value("elevations", s.elevations);
      s.max_elevation_deg = js.value("max_elevation_deg", s.max_elevation_deg);
      s.max_range = js.value("max_range", s.max_range);
    }
    s.seed = j.value("seed", s.seed);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaViolation, std::string("world spec: ") + e.what());
  }
  return s;
}

WorldSpec load_world_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MissingFile, path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaViolation, path.string() + ": " + e.what());
  }
  return parse_world_spec(j);
}

json to_json(const WorldSpec& s) {
  json j;
  j["name"] = s.name;
  j["spaces"] = json::array();
  for (const auto& sp : s.spaces) {
    json rects = json::array();
    for (const auto& r : sp.rects) rects.push_back({r.xmin, r.ymin, r.xmax, r.ymax});
    j["spaces"].push_back({{"name", sp.name}, {"kind", sp.kind == SpaceKind::Room ? "room" : "corridor"},
                           {"rects", rects}});
  }
  j["doors"] = json::array();
  for (const auto& d : s.doors) {
    json jd = {{"between", {d.a, d.b}}, {"center", d.center}, {"width", d.width}};
    if (d.axis) jd["axis"] = to_string(*d.axis);
    if (d.offset) jd["offset"] = *d.offset;
    j["doors"].push_back(jd);
  }
  json wps = json::array();
  for (const auto& w : s.waypoints) wps.push_back({w.x(), w.y()});
  j["trajectory"] = {{"waypoints", wps}, {"step", s.step}, {"speed", s.speed}};
  j["noise"] = s.noise;
  j["dropout"] = s.dropout;
  j["margin"] = s.margin;
  j["resolution"] = s.resolution;
  j["wall_height"] = s.wall_height;
  j["door_height"] = s.door_height;
  j["sensor_height"] = s.sensor_height;
  j["sensor"] = {{"azimuths", s.azimuths},
                 {"elevations", s.elevations},
                 {"max_elevation_deg", s.max_elevation_deg},
                 {"max_range", s.max_range}};
  j["seed"] = s.seed;
  return j;
}

int World::plane_of(const WallFace& f) const {
  for (const auto& p : planes)
    if (p.axis == f.axis && p.facing == f.facing && p.offset == f.offset) return p.id;
  return -1;
}

World generate_world(const WorldSpec& spec) {
  if (spec.spaces.empty()) throw Error(ErrorKind::InvalidSpec, "world has no spaces");
  if (!(spec.resolution > 0.0)) throw Error(ErrorKind::InvalidSpec, "resolution must be positive");
  World w;
  w.spec = spec;

  std::set<std::string> names;
  Bounds ext{kInf, -kInf, kInf, -kInf};
  std::vector<double> xs, ys;
  for (const auto& sp : spec.spaces) {
    if (!names.insert(sp.name).second) throw Error(ErrorKind::InvalidSpec, "duplicate space '" + sp.name + "'");
    if (sp.name == kExterior) throw Error(ErrorKind::InvalidSpec, "space name 'exterior' is reserved");
    if (sp.rects.empty()) throw Error(ErrorKind::InvalidSpec, "space '" + sp.name + "' has no rects");
    for (const auto& r : sp.rects) {
      if (!(r.width() > 0.0 && r.height() > 0.0))
        throw Error(ErrorKind::InvalidSpec, "space '" + sp.name + "' has an empty rect");
      ext = {std::min(ext.xmin, r.xmin), std::max(ext.xmax, r.xmax), std::min(ext.ymin, r.ymin),
             std::max(ext.ymax, r.ymax)};
      xs.insert(xs.end(), {r.xmin, r.xmax});
      ys.insert(ys.end(), {r.ymin, r.ymax});
    }
  }
  for (std::size_t a = 0; a < spec.spaces.size(); ++a)
    for (std::size_t b = a + 1; b < spec.spaces.size(); ++b)
      for (const auto& ra : spec.spaces[a].rects)
        for (const auto& rb : spec.spaces[b].rects)
          if (interiors_overlap(ra, rb))
            throw Error(ErrorKind::InvalidSpec,
                        "spaces '" + spec.spaces[a].name + "' and '" + spec.spaces[b].name + "' overlap");

  const double res = spec.resolution;
  w.extent = {ext.xmin - spec.margin, ext.xmax + spec.margin, ext.ymin - spec.margin, ext.ymax + spec.margin};
  for (double v : xs)
    if (!on_lattice(v, w.extent.xmin, res))
      throw Error(ErrorKind::InvalidSpec, "x coordinate " + std::to_string(v) + " is off the grid lattice");
  for (double v : ys)
    if (!on_lattice(v, w.extent.ymin, res))
      throw Error(ErrorKind::InvalidSpec, "y coordinate " + std::to_string(v) + " is off the grid lattice");

  OccupancyGrid2D& g = w.raster;
  g.origin = {w.extent.xmin, w.extent.ymin};
  g.resolution = res;
  g.nx = int(std::lround(w.extent.width() / res));
  g.ny = int(std::lround(w.extent.height() / res));
  g.states.assign(g.size(), CellState::Unobserved);
  g.slice_height = spec.sensor_height;

  for (std::size_t s = 0; s < spec.spaces.size(); ++s) {
    std::vector<int> cells;
    for (const auto& r : spec.spaces[s].rects) {
      const CellRange cr = g.rasterize(r);
      for (int j = cr.j0; j < cr.j1; ++j)
        for (int i = cr.i0; i < cr.i1; ++i) cells.push_back(g.index(i, j));
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

    // Boundary edges keep the space on their left.
    const TracedBoundary tb = trace_boundary(cells, g);
    std::vector<const Polygon*> loops{&tb.outer};
    for (const auto& h : tb.holes) loops.push_back(&h);
    for (const Polygon* loop : loops) {
      for (std::size_t k = 0, n = loop->size(); k < n; ++k) {
        const Eigen::Vector2d p = (*loop)[k], q = (*loop)[(k + 1) % n];
        WallFace f;
        f.space = int(s);
        if (std::abs(p.x() - q.x()) < kEps) {
          f.axis = Axis::X;
          f.facing = q.y() > p.y() ? Facing::Negative : Facing::Positive;
          f.offset = snap(p.x(), xs, res);
          f.lo = snap(std::min(p.y(), q.y()), ys, res);
          f.hi = snap(std::max(p.y(), q.y()), ys, res);
        } else {
          f.axis = Axis::Y;
          f.facing = q.x() > p.x() ? Facing::Positive : Facing::Negative;
          f.offset = snap(p.y(), ys, res);
          f.lo = snap(std::min(p.x(), q.x()), xs, res);
          f.hi = snap(std::max(p.x(), q.x()), xs, res);
        }
        w.faces.push_back(f);
      }
    }
    w.space_cells.push_back(std::move(cells));
  }

  std::set<std::tuple<Axis, Facing, double>> keys;
  for (const auto& f : w.faces) keys.insert({f.axis, f.facing, f.offset});
  int id = 0;
  for (const auto& [axis, facing, offset] : keys) w.planes.push_back({id++, axis, facing, offset});

  for (std::size_t k = 0; k < spec.doors.size(); ++k) {
    const DoorSpec& d = spec.doors[k];
    const int a = find_space(spec, d.a);
    const int b = d.b == kExterior ? -1 : find_space(spec, d.b);
    if (a < 0 || (b < 0 && d.b != kExterior))
      throw Error(ErrorKind::InvalidSpec, "door " + std::to_string(k) + " names an unknown space");
    if (!(d.width > 0.0)) throw Error(ErrorKind::InvalidSpec, "door " + std::to_string(k) + " has no width");
    const double lo = d.center - 0.5 * d.width, hi = d.center + 0.5 * d.width;
    auto holds = [&](const WallFace& f) {
      return f.lo <= lo + kEps && f.hi >= hi - kEps && (!d.axis || f.axis == *d.axis) &&
             (!d.offset || std::abs(f.offset - *d.offset) < kEps);
    };
    std::set<std::pair<Axis, double>> walls;
    for (const auto& fa : w.faces) {
      if (fa.space != a || !holds(fa)) continue;
      if (b < 0) {
        walls.insert({fa.axis, fa.offset});
        continue;
      }
      for (const auto& fb : w.faces)
        if (fb.space == b && fb.axis == fa.axis && fb.facing != fa.facing && std::abs(fb.offset - fa.offset) < kEps &&
            holds(fb))
          walls.insert({fa.axis, fa.offset});
    }
    if (walls.empty())
      throw Error(ErrorKind::InvalidSpec, "door " + std::to_string(k) + " (" + d.a + " / " + d.b +
                                              ") does not lie on a shared wall");
    if (walls.size() > 1)
      throw Error(ErrorKind::InvalidSpec, "door " + std::to_string(k) + " is ambiguous; give axis and offset");
    DoorTruth t;
    t.index = int(k);
    t.axis = walls.begin()->first;
    t.offset = walls.begin()->second;
    t.center = d.center;
    t.width = d.width;
    t.space_a = a;
    t.space_b = b;
    w.doors.push_back(t);
  }
  return w;
}

std::vector<TrajectorySample> sample_trajectory(const WorldSpec& spec) {
  std::vector<TrajectorySample> out;
  if (spec.waypoints.empty()) return out;
  const double step = spec.step > 0.0 ? spec.step : 0.5;
  const double speed = spec.speed > 0.0 ? spec.speed : 0.5;
  auto emit = [&](const Eigen::Vector2d& p, double s) {
    out.push_back({s / speed, Eigen::Vector3d(p.x(), p.y(), spec.sensor_height)});
  };
  double travelled = 0.0, next = 0.0;
  for (std::size_t k = 0; k + 1 < spec.waypoints.size(); ++k) {
    const Eigen::Vector2d a = spec.waypoints[k], b = spec.waypoints[k + 1];
    const double len = (b - a).norm();
    while (next <= travelled + len + kEps && len > 0.0) {
      const double u = std::min(1.0, (next - travelled) / len);
      emit(a + u * (b - a), next);
      next += step;
    }
    travelled += len;
  }
  if (out.empty() || (out.back().position.head<2>() - spec.waypoints.back()).norm() > kEps)
    emit(spec.waypoints.back(), travelled);
  return out;
}

namespace {

struct Crossing {
  double r = 0.0;
  double along = 0.0;
  int face = 0;
  bool in_door = false;
};

class Caster {
 public:
  Caster(const World& world) : w_(world), spec_(world.spec), rng_(world.spec.seed) {
    const double res = spec_.resolution;
    grid_.origin = {w_.extent.xmin, w_.extent.ymin, 0.0};
    grid_.resolution = res;
    grid_.dims = {w_.raster.nx, w_.raster.ny, int(std::lround(spec_.wall_height / res))};
    grid_.states.assign(grid_.size(), CellState::Unobserved);
    timeline_.first_free.assign(grid_.size(), kInf);
    timeline_.first_occupied.assign(grid_.size(), kInf);
    clouds_.resize(w_.planes.size());
  }

  void cast_from(const Eigen::Vector3d& o, double t) {
    const double max_el = spec_.max_elevation_deg * std::numbers::pi / 180.0;
    std::vector<double> elevations;
    for (int e = 0; e < spec_.elevations; ++e)
      elevations.push_back(spec_.elevations == 1 ? 0.0
                                                 : -max_el + 2.0 * max_el * double(e) / double(spec_.elevations - 1));
    std::vector<Crossing> xs;
    for (int a = 0; a < spec_.azimuths; ++a) {
      const double phi = 2.0 * std::numbers::pi * double(a) / double(spec_.azimuths);
      const Eigen::Vector2d d(std::cos(phi), std::sin(phi));
      crossings(o.head<2>(), d, xs);
      for (double el : elevations) trace(o, d, el, xs, t);
    }
  }

  void finish(Scene& scene) {
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (timeline_.first_occupied[i] < kInf)
        grid_.states[i] = CellState::Occupied;
      else if (timeline_.first_free[i] < kInf)
        grid_.states[i] = CellState::Free;
    }
    for (const auto& p : w_.planes) {
      SegmentCloud& c = clouds_[std::size_t(p.id)];
      if (c.points.empty()) continue;
      LayoutPlane observed = p;
      double sum = 0.0;
      for (const auto& pt : c.points) sum += across_plane(p.axis, pt);
      observed.offset = sum / double(c.points.size());
      c.plane_id = p.id;
      scene.planes.push_back(observed);
      scene.clouds.push_back(std::move(c));
    }
    scene.voxels = std::move(grid_);
    scene.timeline = std::move(timeline_);
  }

 private:
  void crossings(const Eigen::Vector2d& o, const Eigen::Vector2d& d, std::vector<Crossing>& out) const {
    out.clear();
    for (std::size_t k = 0; k < w_.faces.size(); ++k) {
      const WallFace& f = w_.faces[k];
      const double dn = f.axis == Axis::X ? d.x() : d.y();
      if (std::abs(dn) < 1e-15) continue;
      const double on = f.axis == Axis::X ? o.x() : o.y();
      const double r = (f.offset - on) / dn;
      if (r <= kEps) continue;
      const double along = (f.axis == Axis::X ? o.y() : o.x()) + r * (f.axis == Axis::X ? d.y() : d.x());
      if (along < f.lo - kEps || along > f.hi + kEps) continue;
      Crossing c{r, along, int(k), false};
      for (const auto& door : w_.doors)
        if (door.axis == f.axis && std::abs(door.offset - f.offset) < kEps && along > door.lo() && along < door.hi())
          c.in_door = true;
      out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) { return a.r < b.r; });
  }

  void trace(const Eigen::Vector3d& o, const Eigen::Vector2d& d, double el, const std::vector<Crossing>& xs,
             double t) {
    const double ce = std::cos(el), te = std::tan(el);
    const double r_max = spec_.max_range * ce;
    double r_cap = kInf;
    if (te < 0.0) r_cap = -o.z() / te;
    if (te > 0.0) r_cap = (spec_.wall_height - o.z()) / te;
    double r_end = std::min(r_cap, r_max);
    bool hit = r_cap <= r_max;
    std::size_t hit_begin = xs.size();
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (xs[k].r >= r_end) break;
      const double z = o.z() + xs[k].r * te;
      if (xs[k].in_door && z < spec_.door_height) continue;
      r_end = xs[k].r;
      hit = true;
      hit_begin = k;
      break;
    }
    const Eigen::Vector3d dir(ce * d.x(), ce * d.y(), std::sin(el));
    const std::size_t last = march(o, dir, r_end / ce, t);
    if (hit && last != kNone) mark_occupied(last, t);
    if (hit_begin < xs.size()) record_point(o, d, te, xs, hit_begin, t);
  }

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  // Marks every voxel on [0, length) free; returns the last one visited.
  std::size_t march(const Eigen::Vector3d& o, const Eigen::Vector3d& dir, double length, double t) {
    const double res = grid_.resolution;
    const Eigen::Vector3d rel = (o - grid_.origin) / res;
    std::array<int, 3> v{}, step{};
    std::array<double, 3> t_max{}, t_delta{};
    for (int a = 0; a < 3; ++a) {
      v[std::size_t(a)] = int(std::floor(rel[a]));
      if (dir[a] > 0) {
        step[std::size_t(a)] = 1;
        t_max[std::size_t(a)] = (v[std::size_t(a)] + 1 - rel[a]) * res / dir[a];
        t_delta[std::size_t(a)] = res / dir[a];
      } else if (dir[a] < 0) {
        step[std::size_t(a)] = -1;
        t_max[std::size_t(a)] = (v[std::size_t(a)] - rel[a]) * res / dir[a];
        t_delta[std::size_t(a)] = -res / dir[a];
      } else {
        t_max[std::size_t(a)] = kInf;
        t_delta[std::size_t(a)] = kInf;
      }
    }
    const double stop = length - kEps;
    double tc = 0.0;
    std::size_t last = kNone;
    while (tc < stop) {
      if (v[0] < 0 || v[1] < 0 || v[2] < 0 || v[0] >= grid_.dims[0] || v[1] >= grid_.dims[1] ||
          v[2] >= grid_.dims[2])
        break;
      last = grid_.index(v[0], v[1], v[2]);
      timeline_.first_free[last] = std::min(timeline_.first_free[last], t);
      const int a = t_max[0] < t_max[1] ? (t_max[0] < t_max[2] ? 0 : 2) : (t_max[1] < t_max[2] ? 1 : 2);
      tc = t_max[std::size_t(a)];
      t_max[std::size_t(a)] += t_delta[std::size_t(a)];
      v[std::size_t(a)] += step[std::size_t(a)];
    }
    return last;
  }

  void mark_occupied(std::size_t cell, double t) {
    timeline_.first_occupied[cell] = std::min(timeline_.first_occupied[cell], t);
  }

  void record_point(const Eigen::Vector3d& o, const Eigen::Vector2d& d, double te, const std::vector<Crossing>& xs,
                    std::size_t k, double t) {
    // Only a face whose normal points back at the sensor is seen.
    const double r = xs[k].r;
    // At a junction several faces share r; take the one hit furthest from its ends.
    int face = -1;
    double along = 0.0, margin = -1.0;
    for (std::size_t m = k; m < xs.size() && xs[m].r <= r + kEps; ++m) {
      const WallFace& f = w_.faces[std::size_t(xs[m].face)];
      const double dn = f.axis == Axis::X ? d.x() : d.y();
      if ((dn > 0) != (f.facing == Facing::Negative)) continue;
      const double mg = std::min(xs[m].along - f.lo, f.hi - xs[m].along);
      if (mg > margin) {
        margin = mg;
        face = xs[m].face;
        along = xs[m].along;
      }
    }
    if (face < 0) return;
    const WallFace& f = w_.faces[std::size_t(face)];
    const int plane = w_.plane_of(f);
    const double z = o.z() + r * te;
    const auto key = std::make_tuple(plane, long(std::floor(along / kLattice)), long(std::floor(z / kLattice)));
    if (!seen_.insert(key).second) return;
    if (spec_.dropout > 0.0 && uniform01(rng_) < spec_.dropout) return;
    Eigen::Vector3d p = f.axis == Axis::X ? Eigen::Vector3d(f.offset, along, z) : Eigen::Vector3d(along, f.offset, z);
    for (int a = 0; a < 3; ++a) p[a] += truncated_normal(rng_, spec_.noise);
    SegmentCloud& c = clouds_[std::size_t(plane)];
    c.points.push_back(p);
    c.times.push_back(t);
  }

  static constexpr double kLattice = 0.05;

  const World& w_;
  const WorldSpec& spec_;
  std::mt19937_64 rng_;
  VoxelGrid grid_;
  VoxelTimeline timeline_;
  std::vector<SegmentCloud> clouds_;
  std::set<std::tuple<int, long, long>> seen_;
};

bool inside_some_space(const WorldSpec& spec, const Eigen::Vector2d& p) {
  for (const auto& sp : spec.spaces)
    for (const auto& r : sp.rects)
      if (p.x() >= r.xmin - kEps && p.x() <= r.xmax + kEps && p.y() >= r.ymin - kEps && p.y() <= r.ymax + kEps)
        return true;
  return false;
}

}  // namespace

Scene observe_world(const World& world) {
  Scene scene;
  scene.name = world.spec.name;
  scene.trajectory = sample_trajectory(world.spec);
  for (const auto& s : scene.trajectory) {
    if (!inside_some_space(world.spec, s.position.head<2>())) {
      std::ostringstream msg;
      msg << "pose at (" << s.position.x() << ", " << s.position.y() << ") is outside every space";
      throw Error(ErrorKind::PoseOutsideFreeSpace, msg.str());
    }
  }
  Caster caster(world);
  for (const auto& s : scene.trajectory) caster.cast_from(s.position, s.t);
  caster.finish(scene);
  return scene;
}

SegmentCloud sample_wall(int plane_id, double length, const std::vector<Aperture>& apertures, double noise,
                         double dropout, std::uint64_t seed, double height, double door_height, double spacing) {
  std::mt19937_64 rng(seed);
  SegmentCloud c;
  c.plane_id = plane_id;
  const int ny = int(std::lround(length / spacing)), nz = int(std::lround(height / spacing));
  for (int k = 0; k < nz; ++k) {
    const double z = (k + 0.5) * spacing;
    for (int i = 0; i < ny; ++i) {
      const double y = (i + 0.5) * spacing;
      const bool open = z < door_height && std::any_of(apertures.begin(), apertures.end(), [&](const Aperture& a) {
                          return y > a.center - 0.5 * a.width && y < a.center + 0.5 * a.width;
                        });
      if (open) continue;
      if (dropout > 0.0 && uniform01(rng) < dropout) continue;
      c.points.emplace_back(truncated_normal(rng, noise), y + truncated_normal(rng, noise),
                            z + truncated_normal(rng, noise));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Fixtures

namespace {

SpaceSpec room(std::string name, double x0, double y0, double x1, double y1, SpaceKind kind = SpaceKind::Room) {
  return {std::move(name), kind, {Bounds{x0, x1, y0, y1}}};
}

DoorSpec door(std::string a, std::string b, double center, double width = 1.0) {
  DoorSpec d;
  d.a = std::move(a);
  d.b = std::move(b);
  d.center = center;
  d.width = width;
  return d;
}

// Walk from the corridor through a door at (x, wall_y) to `target` and back.
void visit(std::vector<Eigen::Vector2d>& wp, double corridor_y, double x, double wall_y, const Eigen::Vector2d& target,
           double inside) {
  const double dir = wall_y > corridor_y ? 1.0 : -1.0;
  wp.emplace_back(x, corridor_y);
  wp.emplace_back(x, wall_y + dir * inside);
  if ((target - wp.back()).norm() > kEps) {
    wp.push_back(target);
    wp.emplace_back(x, wall_y + dir * inside);
  }
  wp.emplace_back(x, corridor_y);
}

}  // namespace

WorldSpec one_room() {
  WorldSpec s;
  s.name = "one_room";
  s.spaces = {room("room", 0, 0, 6, 6)};
  s.waypoints = {{2.0, 3.0}, {4.0, 3.0}};
  return s;
}

WorldSpec two_rooms_shared_wall() {
  WorldSpec s;
  s.name = "two_rooms_shared_wall";
  s.spaces = {room("room1", 0, 0, 5, 6), room("room2", 5, 0, 10, 5)};
  s.doors = {door("room1", "room2", 2.5)};
  s.waypoints = {{2.5, 3.0}, {3.5, 2.5}, {6.5, 2.5}, {7.5, 2.5}};
  return s;
}

WorldSpec three_rooms_corridor() {
  WorldSpec s;
  s.name = "three_rooms_corridor";
  s.spaces = {room("corridor", 0, 0, 28, 2.5, SpaceKind::Corridor), room("room_a", 1, 2.5, 10, 9),
              room("room_b", 10, 2.5, 28, 9), room("room_c", 28, -1, 34, 9)};
  s.doors = {door("room_a", "corridor", 5.5), door("room_b", "corridor", 19.0), door("room_c", "corridor", 1.25)};
  s.waypoints = {{0.5, 1.25}, {19.0, 1.25}, {19.0, 5.75}, {19.0, 1.25}, {30.0, 1.25}, {31.0, 4.0}};
  return s;
}

WorldSpec four_rooms_corridor() {
  WorldSpec s;
  s.name = "four_rooms_corridor";
  s.spaces = {room("corridor", 0, 0, 30, 2.5, SpaceKind::Corridor)};
  for (int k = 0; k < 4; ++k) {
    const std::string name = "room" + std::to_string(k + 1);
    s.spaces.push_back(room(name, 7.5 * k, 2.5, 7.5 * (k + 1), 9));
    s.doors.push_back(door(name, "corridor", 7.5 * k + 3.75));
  }
  s.waypoints = {{0.5, 1.25}};
  visit(s.waypoints, 1.25, 3.75, 2.5, {3.75, 5.75}, 1.0);
  visit(s.waypoints, 1.25, 18.75, 2.5, {18.75, 5.75}, 1.0);
  s.waypoints.emplace_back(29.5, 1.25);
  return s;
}

WorldSpec l_shaped_room() {
  WorldSpec s;
  s.name = "l_shaped_room";
  s.spaces = {{"room", SpaceKind::Room, {Bounds{0, 8, 0, 4}, Bounds{0, 4, 4, 8}}}};
  s.waypoints = {{6.0, 2.0}, {2.0, 2.0}, {2.0, 6.0}};
  return s;
}

WorldSpec office_block() {
  WorldSpec s;
  s.name = "office_block";
  s.spaces = {room("corridor", 0, 4, 30, 6.5, SpaceKind::Corridor)};
  const double north[] = {0, 8, 15, 22, 30};
  const double south[] = {0, 10, 20, 30};
  std::vector<std::pair<double, std::string>> doors;
  for (int k = 0; k < 4; ++k) {
    const std::string name = "north" + std::to_string(k + 1);
    s.spaces.push_back(room(name, north[k], 6.5, north[k + 1], 12));
    const double c = 0.5 * (north[k] + north[k + 1]);
    s.doors.push_back(door(name, "corridor", c, 0.9 + 0.1 * k));
    doors.emplace_back(c, name);
  }
  for (int k = 0; k < 3; ++k) {
    const std::string name = "south" + std::to_string(k + 1);
    s.spaces.push_back(room(name, south[k], 0, south[k + 1], 4));
    const double c = south[k] + 2.5;
    s.doors.push_back(door(name, "corridor", c, 1.0));
    doors.emplace_back(c, name);
  }
  std::sort(doors.begin(), doors.end());
  s.waypoints = {{0.5, 5.25}};
  for (const auto& [c, name] : doors) {
    const bool north_side = name.rfind("north", 0) == 0;
    const Bounds& r = s.spaces[std::size_t(find_space(s, name))].rects[0];
    visit(s.waypoints, 5.25, c, north_side ? 6.5 : 4.0,
          {0.5 * (r.xmin + r.xmax), 0.5 * (r.ymin + r.ymax)}, 1.0);
  }
  s.waypoints.emplace_back(29.5, 5.25);
  return s;
}

WorldSpec leak_world() {
  WorldSpec s;
  s.name = "leak_world";
  s.spaces = {room("room", 0, 0, 6, 6)};
  s.doors = {door("room", kExterior, 3.0)};
  s.doors[0].axis = Axis::Y;
  s.doors[0].offset = 0.0;
  s.margin = 2.0;
  s.waypoints = {{3.0, 1.0}, {3.0, 3.0}};
  return s;
}

WorldSpec random_office(std::uint64_t seed, bool full) {
  std::mt19937_64 rng(seed);
  auto pick = [&](double lo, double hi, double step) {
    const int n = int(std::lround((hi - lo) / step));
    return lo + step * double(std::uniform_int_distribution<int>(0, n)(rng));
  };
  WorldSpec s;
  s.name = "random_office_" + std::to_string(seed) + (full ? "" : "_partial");
  s.seed = seed;
  const double cw = pick(2.0, 2.5, 0.5);

  std::vector<double> north{0.0};
  while (north.back() < 28.0) north.push_back(north.back() + pick(3.5, 8.0, 0.5));
  const double length = north.back();
  std::vector<double> south{0.0};
  while (south.back() < length) south.push_back(south.back() + pick(3.5, 8.0, 0.5));
  south.back() = length;
  if (south.back() - south[south.size() - 2] < 3.5) south.erase(south.end() - 2);

  s.spaces = {room("corridor", 0, 0, length, cw, SpaceKind::Corridor)};
  struct Entry {
    double door;
    std::string name;
    double wall_y;
    Eigen::Vector2d center;
  };
  std::vector<Entry> entries;
  auto add_rooms = [&](const std::vector<double>& edges, bool north_side) {
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      const double depth = pick(4.0, 8.0, 0.5);
      const std::string name = (north_side ? "n" : "s") + std::to_string(k + 1);
      const double y0 = north_side ? cw : -depth, y1 = north_side ? cw + depth : 0.0;
      s.spaces.push_back(room(name, edges[k], y0, edges[k + 1], y1));
      const double width = pick(0.8, 1.2, 0.1);
      const double lo = edges[k] + 1.0 + 0.5 * width, hi = edges[k + 1] - 1.0 - 0.5 * width;
      const double c = std::round(pick(lo, hi, 0.1) * 10.0) / 10.0;
      s.doors.push_back(door(name, "corridor", c, width));
      entries.push_back({c, name, north_side ? cw : 0.0, {0.5 * (edges[k] + edges[k + 1]), 0.5 * (y0 + y1)}});
    }
  };
  add_rooms(north, true);
  add_rooms(south, false);
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.door < b.door; });

  const double mid = 0.5 * cw;
  s.waypoints = {{0.5, mid}};
  for (const auto& e : entries) {
    const double dir = e.wall_y > mid ? 1.0 : -1.0;
    if (full)
      visit(s.waypoints, mid, e.door, e.wall_y, e.center, 1.0);
    else
      visit(s.waypoints, mid, e.door, e.wall_y, {e.door, e.wall_y + dir * 0.3}, 0.3);
  }
  s.waypoints.emplace_back(length - 0.5, mid);
  return s;
}

std::vector<std::string> fixture_names() {
  return {"one_room",    "two_rooms_shared_wall", "three_rooms_corridor", "four_rooms_corridor",
          "l_shaped_room", "office_block",        "leak_world"};
}

WorldSpec fixture(const std::string& name) {
  if (name == "one_room") return one_room();
  if (name == "two_rooms_shared_wall") return two_rooms_shared_wall();
  if (name == "three_rooms_corridor") return three_rooms_corridor();
  if (name == "four_rooms_corridor") return four_rooms_corridor();
  if (name == "l_shaped_room") return l_shaped_room();
  if (name == "office_block") return office_block();
  if (name == "leak_world") return leak_world();
  throw Error(ErrorKind::InvalidSpec, "unknown fixture '" + name + "'");
}

}  // namespace layout::synth
