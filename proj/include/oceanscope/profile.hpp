#pragma once

#include <string>
#include <vector>

#include "oceanscope/dataset.hpp"

namespace oceanscope {

/// One field at one time step along the needle.
struct ProfileSeries {
  std::string field;
  Index t = 0;
  std::vector<double> depths;  // meters, increasing
  std::vector<double> values;  // NaN on land or below the sea floor
};

struct DepthInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct DepthProfile {
  double lon = 0.0;
  double lat = 0.0;
  bool land = false;  // every sample of every series is NaN
  std::vector<ProfileSeries> series;
  std::vector<DepthInterval> selection;
};

/// Bilinear lat-lon sample of `field` at every depth level.
std::vector<double> needleColumn(const ScalarVolume& field, double lon, double lat);

/// Samples each field (variable or derived name) at every step of `range`.
DepthProfile sampleNeedle(const Dataset& dataset, double lon, double lat, const std::vector<std::string>& fields,
                          TimeRange range, const VelocityNames& names = {}, Metric metric = Metric::spherical);

/// Keeps samples whose depth lies in the union of the closed intervals.
DepthProfile selectDepthInterval(const DepthProfile& profile, const std::vector<DepthInterval>& intervals);

/// Rows time,depth,field,value.
std::string profileToCsv(const DepthProfile& profile);
std::string profileToJson(const DepthProfile& profile);
std::string profilesToJson(const std::vector<DepthProfile>& profiles);

}  // namespace oceanscope
