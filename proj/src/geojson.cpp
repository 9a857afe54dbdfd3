#include "geojson.hpp"

#include <cmath>

namespace oceanscope::geojson {

namespace {

nlohmann::json position(const Position& p) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : p) out.push_back(number(x));
  return out;
}

}  // namespace

nlohmann::json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

nlohmann::json lineString(const std::vector<Position>& coordinates, nlohmann::json properties) {
  nlohmann::json coords = nlohmann::json::array();
  for (const auto& p : coordinates) coords.push_back(position(p));
  return {{"type", "Feature"},
          {"geometry", {{"type", "LineString"}, {"coordinates", std::move(coords)}}},
          {"properties", std::move(properties)}};
}

nlohmann::json point(const Position& coordinates, nlohmann::json properties) {
  return {{"type", "Feature"},
          {"geometry", {{"type", "Point"}, {"coordinates", position(coordinates)}}},
          {"properties", std::move(properties)}};
}

nlohmann::json featureCollection(std::vector<nlohmann::json> features) {
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

}  // namespace oceanscope::geojson
