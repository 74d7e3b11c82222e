#include "layout/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace layout {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

const char* fill_for(RegionLabel l) {
  switch (l) {
    case RegionLabel::Room: return "#00ffff";
    case RegionLabel::Corridor: return "#ff00ff";
    default: return "#888888";
  }
}

// Even-odd test against every ring of a region.
bool inside(const Region& r, const Eigen::Vector2d& p) {
  bool in = false;
  auto ring = [&](const Polygon& poly) {
    for (std::size_t k = 0, n = poly.size(); k < n; ++k) {
      const auto& a = poly[k];
      const auto& b = poly[(k + 1) % n];
      if ((a.y() > p.y()) != (b.y() > p.y()) && p.x() < a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y()))
        in = !in;
    }
  };
  ring(r.outer_boundary);
  for (const auto& h : r.holes) ring(h);
  return in;
}

}  // namespace

std::string render_svg(const FloorPlan& plan, const OccupancyGrid2D& grid, const SvgStyle& style) {
  const double s = style.pixels_per_meter, pad = style.padding;
  const double w_m = grid.nx * grid.resolution, h_m = grid.ny * grid.resolution;
  const double width = w_m * s + 2 * pad, height = h_m * s + 2 * pad + 30.0;
  auto px = [&](double x) { return pad + (x - grid.origin.x()) * s; };
  auto py = [&](double y) { return pad + (grid.origin.y() + h_m - y) * s; };

  std::vector<char> in_plan(grid.size(), 0);
  for (const auto& r : plan.regions) {
    if (!r.cells.empty()) {
      for (int c : r.cells) in_plan[std::size_t(c)] = 1;
      continue;
    }
    // Plans read from disk carry no cell lists.
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        if (inside(r, grid.cell_center(i, j))) in_plan[std::size_t(grid.index(i, j))] = 1;
  }

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#000000\"/>\n";

  // Underlay as horizontal runs of equal shade.
  out << "<g id=\"underlay\" shape-rendering=\"crispEdges\">\n";
  const double cs = grid.resolution * s;
  for (int j = 0; j < grid.ny; ++j) {
    auto shade = [&](int i) {
      const int c = grid.index(i, j);
      if (grid.states[std::size_t(c)] == CellState::Free) return 2;
      if (grid.states[std::size_t(c)] == CellState::Unobserved && in_plan[std::size_t(c)]) return 1;
      return 0;
    };
    for (int i = 0; i < grid.nx;) {
      const int k = shade(i);
      int e = i + 1;
      while (e < grid.nx && shade(e) == k) ++e;
      if (k != 0) {
        out << "<rect x=\"" << num(pad + i * cs) << "\" y=\"" << num(pad + (grid.ny - 1 - j) * cs) << "\" width=\""
            << num((e - i) * cs) << "\" height=\"" << num(cs) << "\" fill=\"" << (k == 2 ? "#ffffff" : "#808080")
            << "\"/>\n";
      }
      i = e;
    }
  }
  out << "</g>\n";

  out << "<g id=\"regions\" fill-opacity=\"0.45\" stroke=\"#202020\" stroke-width=\"1\">\n";
  for (const auto& r : plan.regions) {
    out << "<path class=\"" << to_string(r.label) << "\" fill=\"" << fill_for(r.label)
        << "\" fill-rule=\"evenodd\" d=\"";
    auto ring = [&](const Polygon& poly) {
      for (std::size_t k = 0; k < poly.size(); ++k)
        out << (k == 0 ? "M" : " L") << num(px(poly[k].x())) << ',' << num(py(poly[k].y()));
      out << " Z";
    };
    ring(r.outer_boundary);
    for (const auto& h : r.holes) {
      out << ' ';
      ring(h);
    }
    out << "\"/>\n";
  }
  out << "</g>\n";

  out << "<g id=\"doorways\" stroke=\"#ffff00\" stroke-width=\"4\" stroke-linecap=\"butt\">\n";
  for (const auto& d : plan.doorways) {
    auto it = std::find_if(plan.planes.begin(), plan.planes.end(),
                           [&](const LayoutPlane& p) { return p.id == d.plane_id; });
    if (it == plan.planes.end()) continue;
    double x1, y1, x2, y2;
    if (it->axis == Axis::X) {
      x1 = x2 = px(it->offset);
      y1 = py(d.lo());
      y2 = py(d.hi());
    } else {
      y1 = y2 = py(it->offset);
      x1 = px(d.lo());
      x2 = px(d.hi());
    }
    out << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
        << "\"/>\n";
  }
  out << "</g>\n";

  const double bar_y = height - 15.0;
  out << "<g id=\"scale\" stroke=\"#ffffff\" stroke-width=\"2\">\n";
  out << "<line x1=\"" << num(pad) << "\" y1=\"" << num(bar_y) << "\" x2=\"" << num(pad + s) << "\" y2=\""
      << num(bar_y) << "\"/>\n";
  out << "<text x=\"" << num(pad + s + 6) << "\" y=\"" << num(bar_y + 4)
      << "\" fill=\"#ffffff\" stroke=\"none\" font-family=\"sans-serif\" font-size=\"12\">1 m</text>\n";
  out << "</g>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace layout
