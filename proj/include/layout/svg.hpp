#pragma once

#include "layout/model.hpp"

#include <string>

namespace layout {

struct SvgStyle {
  double pixels_per_meter = 20.0;
  double padding = 20.0;  ///< pixels
};

/// Rooms cyan, corridors magenta, doorways as yellow ticks. Underlay: known
/// free white, unobserved cells inside the plan gray, everything else black.
/// Output bytes depend only on the inputs.
std::string render_svg(const FloorPlan& plan, const OccupancyGrid2D& grid, const SvgStyle& style = {});

}  // namespace layout
