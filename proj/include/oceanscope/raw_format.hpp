#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "oceanscope/dataset.hpp"

namespace oceanscope {

/// Raw internal format: `dataset.json` (axes, shape, variables, fill value)
/// next to one little-endian float32 blob per variable per time step,
/// row-major (depth, lat, lon), named `<variable>_t<step>.f32`.
inline constexpr const char* kRawHeaderName = "dataset.json";
inline constexpr const char* kRawFormatTag = "oceanscope-raw";

std::shared_ptr<const DataSource> openRaw(const std::filesystem::path& path);

/// `path` is the header file or the directory holding it.
Dataset ingestRaw(const std::filesystem::path& path, std::vector<std::string> variables = {},
                  const ClipSpec& clip = {});

/// Writes every variable and time step of `dataset`; returns the header path.
std::filesystem::path writeRaw(const Dataset& dataset, const std::filesystem::path& directory);

std::string rawBlobName(const std::string& variable, Index step);

}  // namespace oceanscope
