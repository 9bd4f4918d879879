#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "robin/geometry.hpp"

namespace robin {

/// Polygon JSON:
///   { "name": string, "side_budget": int,
///     "components": [ { "walk": [[x,y],...], "cracks": [ { "polyline": [[x,y],...] } ] } ] }
GeneralizedPolygon polygon_from_json(const nlohmann::json& j);
nlohmann::json polygon_to_json(const GeneralizedPolygon& P);

/// Parse errors carry the line number; validation errors name the offending
/// component and vertex.
GeneralizedPolygon parse_polygon(const std::string& text);
GeneralizedPolygon load_polygon(const std::filesystem::path& path);
void save_polygon(const std::filesystem::path& path, const GeneralizedPolygon& P);

}  // namespace robin
