#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "oceanscope/dataset.hpp"

namespace oceanscope {

/// True when the build links a NetCDF runtime.
bool netcdfAvailable();

/// Opens a CF-style rectilinear NetCDF file whose variables have dimensions
/// (time, depth, lat, lon) or (time, lat, lon). Fill/missing values become
/// NaN, scale_factor/add_offset are applied, depth is made positive-down,
/// decreasing axes are flipped and longitudes normalized to [-180, 180).
/// Reads are serialized through one lock per file.
Dataset ingestNetCDF(const std::filesystem::path& path, std::vector<std::string> variables,
                     const ClipSpec& clip = {});

}  // namespace oceanscope
