#pragma once

#include <json.hpp>

#include <array>
#include <vector>

namespace oceanscope::geojson {

using Position = std::vector<double>;

nlohmann::json lineString(const std::vector<Position>& coordinates, nlohmann::json properties);
nlohmann::json point(const Position& coordinates, nlohmann::json properties);
nlohmann::json featureCollection(std::vector<nlohmann::json> features);

/// JSON number or null for non-finite values.
nlohmann::json number(double value);

}  // namespace oceanscope::geojson
