#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "oceanscope/dataset.hpp"

namespace oceanscope {

class WorkerPool;

/// Row 0 is the top image row.
using FloatImage = Eigen::Array<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// 8-bit RGBA PNG; each pixel's four bytes are the little-endian float32.
std::vector<std::uint8_t> encodeFloatImage(const Eigen::Ref<const FloatImage>& image);
FloatImage decodeFloatImage(const std::vector<std::uint8_t>& png);

void writeFloatImage(const std::filesystem::path& path, const Eigen::Ref<const FloatImage>& image);
FloatImage readFloatImage(const std::filesystem::path& path);

enum class SliceOrientation {
  depth,     // one lat-lon image per depth level, north up
  vertical,  // one depth-lon image per latitude row, surface on top
};

struct CinemaOptions {
  SliceOrientation orientation = SliceOrientation::depth;
  VelocityNames velocity;
  Metric metric = Metric::spherical;
};

struct CinemaRow {
  Index time = 0;
  Index level = 0;       // depth index (or lat index for vertical slices)
  double coordinate = 0; // depth in meters (or latitude)
  std::string field;
  std::string file;      // relative to the database directory
};

struct CinemaIndex {
  std::filesystem::path directory;
  SliceOrientation orientation = SliceOrientation::depth;
  std::vector<std::string> fields;
  std::vector<CinemaRow> rows;
};

/// File name of one image, e.g. time3_depth12_salinity.png.
std::string cinemaFileName(Index t, Index level, const std::string& field, SliceOrientation orientation);

/// One float image per (time, level, field) plus data.csv and metadata.json.
/// Fields may be dataset variables or derived names (speed, vorticity, ...).
CinemaIndex generateDatabase(const Dataset& dataset, const std::vector<std::string>& fields, TimeRange range,
                             const std::filesystem::path& outDir, WorkerPool& pool, const CinemaOptions& options = {});

/// Reads data.csv back.
CinemaIndex readCinemaIndex(const std::filesystem::path& directory);

struct CompressionReport {
  std::uintmax_t databaseBytes = 0;
  std::uintmax_t sourceBytes = 0;
  double ratio = 0.0;  // database / source
};

CompressionReport compressionReport(const Dataset& dataset, const CinemaIndex& index);

std::string compressionToJson(const CompressionReport& report);

}  // namespace oceanscope
