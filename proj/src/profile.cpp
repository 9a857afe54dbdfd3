#include "oceanscope/profile.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "geojson.hpp"
#include "oceanscope/interpolate.hpp"

namespace oceanscope {

std::vector<double> needleColumn(const ScalarVolume& field, double lon, double lat) {
  const SpatialGrid& g = field.grid();
  const auto px = locate(g.lon, lon);
  const auto py = locate(g.lat, lat);
  if (!px || !py) fail(ErrorCode::outOfDomain, fmt::format("needle position ({}, {}) outside the domain", lon, lat));
  std::vector<double> column(static_cast<std::size_t>(g.nDepth()));
  for (Index d = 0; d < g.nDepth(); ++d) column[static_cast<std::size_t>(d)] = sampleBilinear(field, d, *py, *px);
  return column;
}

DepthProfile sampleNeedle(const Dataset& dataset, double lon, double lat, const std::vector<std::string>& fields,
                          TimeRange range, const VelocityNames& names, Metric metric) {
  const SpatialGrid& g = *dataset.spatialGrid();
  if (!g.lon.contains(lon) || !g.lat.contains(lat)) {
    fail(ErrorCode::outOfDomain, fmt::format("needle position ({}, {}) outside the domain", lon, lat));
  }
  if (range.begin < 0 || range.end > dataset.timeSteps()) fail(ErrorCode::bounds, "time range exceeds dataset steps");
  DepthProfile profile;
  profile.lon = lon;
  profile.lat = lat;
  profile.land = true;
  for (Index t = range.begin; t < range.end; ++t) {
    for (const auto& field : fields) {
      ProfileSeries s;
      s.field = field;
      s.t = t;
      s.depths = g.depth.coords();
      s.values = needleColumn(loadField(dataset, t, field, names, metric), lon, lat);
      for (double v : s.values) profile.land = profile.land && std::isnan(v);
      profile.series.push_back(std::move(s));
    }
  }
  return profile;
}

DepthProfile selectDepthInterval(const DepthProfile& profile, const std::vector<DepthInterval>& intervals) {
  for (const auto& iv : intervals) {
    if (!(iv.lo <= iv.hi)) fail(ErrorCode::invalidParameter, "depth interval requires lo <= hi");
  }
  auto selected = [&](double z) {
    for (const auto& iv : intervals)
      if (z >= iv.lo && z <= iv.hi) return true;
    return false;
  };
  DepthProfile out = profile;
  out.selection = intervals;
  for (auto& s : out.series) {
    ProfileSeries kept{s.field, s.t, {}, {}};
    for (std::size_t k = 0; k < s.depths.size(); ++k) {
      if (!selected(s.depths[k])) continue;
      kept.depths.push_back(s.depths[k]);
      kept.values.push_back(s.values[k]);
    }
    s = std::move(kept);
  }
  return out;
}

std::string profileToCsv(const DepthProfile& profile) {
  std::ostringstream out;
  out << "time,depth,field,value\n";
  for (const auto& s : profile.series) {
    for (std::size_t k = 0; k < s.depths.size(); ++k) {
      out << s.t << ',' << fmt::format("{}", s.depths[k]) << ',' << s.field << ','
          << (std::isnan(s.values[k]) ? std::string("nan") : fmt::format("{}", s.values[k])) << '\n';
    }
  }
  return out.str();
}

namespace {

nlohmann::json profileJson(const DepthProfile& profile) {
  nlohmann::json series = nlohmann::json::array();
  for (const auto& s : profile.series) {
    nlohmann::json values = nlohmann::json::array();
    for (double v : s.values) values.push_back(geojson::number(v));
    series.push_back({{"field", s.field}, {"time", s.t}, {"depths", s.depths}, {"values", std::move(values)}});
  }
  nlohmann::json selection = nlohmann::json::array();
  for (const auto& iv : profile.selection) selection.push_back({iv.lo, iv.hi});
  return {{"position", {{"lon", profile.lon}, {"lat", profile.lat}}},
          {"land", profile.land},
          {"selection", std::move(selection)},
          {"series", std::move(series)}};
}

}  // namespace

std::string profileToJson(const DepthProfile& profile) { return profileJson(profile).dump(2); }

std::string profilesToJson(const std::vector<DepthProfile>& profiles) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& p : profiles) list.push_back(profileJson(p));
  return nlohmann::json{{"profiles", std::move(list)}}.dump(2);
}

}  // namespace oceanscope
