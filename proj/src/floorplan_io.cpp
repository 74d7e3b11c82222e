#include "layout/floorplan_io.hpp"

#include "layout/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace layout {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "layout-floorplan/1";

json polygon_json(const Polygon& poly) {
  json out = json::array();
  for (const auto& v : poly) out.push_back({v.x(), v.y()});
  return out;
}

Polygon polygon_from(const json& j) {
  Polygon poly;
  for (const auto& v : j) poly.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
  return poly;
}

RegionLabel label_from(const std::string& s) {
  if (s == "room") return RegionLabel::Room;
  if (s == "corridor") return RegionLabel::Corridor;
  return RegionLabel::Unlabeled;
}

}  // namespace

json floorplan_to_json(const FloorPlan& plan, const json& parameters) {
  json j;
  j["format"] = kFormat;
  j["provenance"] = {{"scene", plan.provenance},
                     {"observed_until", plan.observed_until ? json(*plan.observed_until) : json(nullptr)}};
  j["parameters"] = parameters;
  j["slice_height"] = plan.slice_height;

  json regions = json::array();
  for (std::size_t k = 0; k < plan.regions.size(); ++k) {
    const Region& r = plan.regions[k];
    json jr;
    jr["id"] = r.id;
    jr["label"] = to_string(r.label);
    jr["boundary"] = polygon_json(r.outer_boundary);
    jr["holes"] = json::array();
    for (const auto& h : r.holes) jr["holes"].push_back(polygon_json(h));
    jr["member_rects"] = r.member_rects;
    jr["cells"] = {{"free", r.cell_stats.free},
                   {"occupied", r.cell_stats.occupied},
                   {"unobserved", r.cell_stats.unobserved}};
    if (k < plan.features.size()) {
      const RegionFeatures& f = plan.features[k];
      jr["features"] = {{"area", f.area},
                        {"perimeter", f.perimeter},
                        {"aspect_ratio", f.aspect_ratio},
                        {"turning_distance", f.turning_distance}};
    }
    regions.push_back(jr);
  }
  j["regions"] = regions;

  json doors = json::array();
  for (const auto& d : plan.doorways)
    doors.push_back(
        {{"id", d.id}, {"plane_id", d.plane_id}, {"center_m", d.center}, {"width_m", d.width}, {"response", d.response}});
  j["doorways"] = doors;

  json planes = json::array();
  for (const auto& p : plan.planes)
    planes.push_back({{"id", p.id}, {"axis", to_string(p.axis)}, {"facing", to_string(p.facing)}, {"offset_m", p.offset}});
  j["planes"] = planes;

  json transitions = json::array();
  for (const auto& t : plan.transitions)
    transitions.push_back({{"doorway", t.doorway_id},
                           {"region_a", t.region_a},
                           {"region_b", t.region_b ? json(*t.region_b) : json("exterior")}});
  j["transitions"] = transitions;
  j["unattached_doorways"] = plan.unattached_doorways;

  const SpeculationStats& s = plan.speculation;
  j["speculation"] = {{"cells_in_plan", s.cells_in_plan},
                      {"known_free", s.known_free},
                      {"occupied", s.occupied},
                      {"speculated_free", s.speculated_free}};
  return j;
}

FloorPlan floorplan_from_json(const json& j) {
  FloorPlan plan;
  try {
    if (j.value("format", "") != kFormat) throw Error(ErrorKind::SchemaViolation, "not a layout-floorplan/1 document");
    const auto& prov = j.at("provenance");
    plan.provenance = prov.value("scene", "");
    if (prov.contains("observed_until") && !prov["observed_until"].is_null())
      plan.observed_until = prov["observed_until"].get<double>();
    plan.slice_height = j.value("slice_height", 0.0);
    for (const auto& jr : j.at("regions")) {
      Region r;
      r.id = jr.at("id").get<int>();
      r.label = label_from(jr.value("label", ""));
      r.outer_boundary = polygon_from(jr.at("boundary"));
      for (const auto& h : jr.value("holes", json::array())) r.holes.push_back(polygon_from(h));
      r.member_rects = jr.value("member_rects", std::vector<int>{});
      if (jr.contains("cells")) {
        r.cell_stats.free = jr["cells"].value("free", std::int64_t{0});
        r.cell_stats.occupied = jr["cells"].value("occupied", std::int64_t{0});
        r.cell_stats.unobserved = jr["cells"].value("unobserved", std::int64_t{0});
      }
      RegionFeatures f;
      if (jr.contains("features")) {
        const auto& jf = jr["features"];
        f = {jf.value("area", 0.0), jf.value("perimeter", 0.0), jf.value("aspect_ratio", 0.0),
             jf.value("turning_distance", 0.0)};
      }
      plan.regions.push_back(std::move(r));
      plan.features.push_back(f);
    }
    for (const auto& jd : j.value("doorways", json::array()))
      plan.doorways.push_back({jd.at("id").get<int>(), jd.at("plane_id").get<int>(), jd.at("center_m").get<double>(),
                               jd.at("width_m").get<double>(), jd.value("response", 0.0)});
    for (const auto& jp : j.value("planes", json::array())) {
      LayoutPlane p;
      p.id = jp.at("id").get<int>();
      p.axis = jp.at("axis").get<std::string>() == "x" ? Axis::X : Axis::Y;
      p.facing = jp.at("facing").get<std::string>() == "+" ? Facing::Positive : Facing::Negative;
      p.offset = jp.at("offset_m").get<double>();
      plan.planes.push_back(p);
    }
    for (const auto& jt : j.value("transitions", json::array())) {
      Transition t;
      t.doorway_id = jt.at("doorway").get<int>();
      t.region_a = jt.at("region_a").get<int>();
      if (jt.at("region_b").is_number_integer()) t.region_b = jt["region_b"].get<int>();
      plan.transitions.push_back(t);
    }
    plan.unattached_doorways = j.value("unattached_doorways", std::vector<int>{});
    if (j.contains("speculation")) {
      const auto& s = j["speculation"];
      plan.speculation = {s.value("cells_in_plan", std::int64_t{0}), s.value("known_free", std::int64_t{0}),
                          s.value("occupied", std::int64_t{0}), s.value("speculated_free", std::int64_t{0})};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaViolation, std::string("floor plan: ") + e.what());
  }
  return plan;
}

std::string dump_floorplan(const FloorPlan& plan, const json& parameters) {
  return floorplan_to_json(plan, parameters).dump(2) + "\n";
}

FloorPlan load_floorplan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MissingFile, path.string());
  try {
    return floorplan_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaViolation, path.string() + ": " + e.what());
  }
}

std::string format_doorways(const std::vector<Doorway>& doorways) {
  std::ostringstream out;
  out << "# plane_id center_m width_m response\n";
  char line[128];
  for (const auto& d : doorways) {
    std::snprintf(line, sizeof line, "%d %.3f %.3f %.6g\n", d.plane_id, d.center, d.width, d.response);
    out << line;
  }
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::MissingFile, "cannot write " + path.string());
  out << text;
}

}  // namespace layout
