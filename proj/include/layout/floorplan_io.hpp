#pragma once

// Floor-plan files ("layout-floorplan/1") and the plain-text doorway list.

#include "layout/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace layout {

nlohmann::json floorplan_to_json(const FloorPlan& plan, const nlohmann::json& parameters = nlohmann::json::object());

/// Reads back what floorplan_to_json wrote. Cell lists are not stored, so
/// regions come back with empty `cells`.
FloorPlan floorplan_from_json(const nlohmann::json& j);

/// Serialized form; identical plans and parameters give identical bytes.
std::string dump_floorplan(const FloorPlan& plan, const nlohmann::json& parameters = nlohmann::json::object());

FloorPlan load_floorplan(const std::filesystem::path& path);

/// One line per doorway: plane_id center_m width_m response.
std::string format_doorways(const std::vector<Doorway>& doorways);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace layout
