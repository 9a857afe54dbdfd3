#include "oceanscope/cinema.hpp"

#include <png.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "oceanscope/worker_pool.hpp"

namespace oceanscope {

static_assert(std::endian::native == std::endian::little, "float image packing assumes a little-endian host");

namespace {

constexpr int kCompressionLevel = 6;
constexpr int kFormatVersion = 1;
constexpr double kReferenceFullScaleRatio = 0.0035;

[[noreturn]] void pngError(png_structp, png_const_charp message) { throw Error(ErrorCode::format, std::string("png: ") + message); }
void pngWarning(png_structp, png_const_charp) {}

void writeToVector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

struct ReadCursor {
  const std::vector<std::uint8_t>* bytes;
  std::size_t offset;
};

void readFromVector(png_structp png, png_bytep data, png_size_t length) {
  auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cursor->offset + length > cursor->bytes->size()) png_error(png, "truncated stream");
  std::memcpy(data, cursor->bytes->data() + cursor->offset, length);
  cursor->offset += length;
}

}  // namespace

std::vector<std::uint8_t> encodeFloatImage(const Eigen::Ref<const FloatImage>& image) {
  if (image.rows() < 1 || image.cols() < 1) fail(ErrorCode::invalidInput, "float image must be non-empty");
  const FloatImage pixels = image;  // contiguous row-major copy
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, pngError, pngWarning);
  if (!png) fail(ErrorCode::runtime, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  try {
    if (!info) fail(ErrorCode::runtime, "png_create_info_struct failed");
    png_set_write_fn(png, &out, writeToVector, nullptr);
    png_set_IHDR(png, info, static_cast<png_uint_32>(pixels.cols()), static_cast<png_uint_32>(pixels.rows()), 8,
                 PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, kCompressionLevel);
    png_write_info(png, info);
    const auto* base = reinterpret_cast<const png_byte*>(pixels.data());
    for (Index r = 0; r < pixels.rows(); ++r) {
      png_write_row(png, const_cast<png_bytep>(base + r * pixels.cols() * 4));
    }
    png_write_end(png, nullptr);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

FloatImage decodeFloatImage(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) fail(ErrorCode::format, "not a PNG stream");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, pngError, pngWarning);
  if (!png) fail(ErrorCode::runtime, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  FloatImage image;
  ReadCursor cursor{&bytes, 0};
  try {
    if (!info) fail(ErrorCode::runtime, "png_create_info_struct failed");
    png_set_read_fn(png, &cursor, readFromVector);
    png_read_info(png, info);
    if (png_get_color_type(png, info) != PNG_COLOR_TYPE_RGBA || png_get_bit_depth(png, info) != 8 ||
        png_get_interlace_type(png, info) != PNG_INTERLACE_NONE) {
      fail(ErrorCode::format, "float image must be non-interlaced 8-bit RGBA");
    }
    const Index width = png_get_image_width(png, info), height = png_get_image_height(png, info);
    image.resize(height, width);
    auto* base = reinterpret_cast<png_bytep>(image.data());
    for (Index r = 0; r < height; ++r) png_read_row(png, base + r * width * 4, nullptr);
    png_read_end(png, nullptr);
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

void writeFloatImage(const std::filesystem::path& path, const Eigen::Ref<const FloatImage>& image) {
  const auto bytes = encodeFloatImage(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
}

FloatImage readFloatImage(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot read " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decodeFloatImage(bytes);
}

std::string cinemaFileName(Index t, Index level, const std::string& field, SliceOrientation orientation) {
  return fmt::format("time{}_{}{}_{}.png", t, orientation == SliceOrientation::depth ? "depth" : "lat", level, field);
}

namespace {

std::string_view orientationName(SliceOrientation o) { return o == SliceOrientation::depth ? "depth" : "vertical"; }

std::string_view levelColumn(SliceOrientation o) { return o == SliceOrientation::depth ? "depth" : "lat"; }

/// Image of one level: depth slices flipped so north is the top row;
/// vertical slices keep the surface on top.
FloatImage sliceImage(const ScalarVolume& field, Index level, SliceOrientation o) {
  if (o == SliceOrientation::depth) return field.slice(level).colwise().reverse();
  FloatImage image(field.depths(), field.cols());
  for (Index d = 0; d < field.depths(); ++d) image.row(d) = field.slice(d).row(level);
  return image;
}

void writeText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
}

}  // namespace

CinemaIndex generateDatabase(const Dataset& dataset, const std::vector<std::string>& fields, TimeRange range,
                             const std::filesystem::path& outDir, WorkerPool& pool, const CinemaOptions& options) {
  if (fields.empty()) fail(ErrorCode::invalidParameter, "cinema database needs at least one field");
  if (range.begin < 0 || range.end > dataset.timeSteps()) fail(ErrorCode::bounds, "time range exceeds dataset steps");
  for (const auto& f : fields) {
    if (f.empty() || f.find_first_of(",/\\\n") != std::string::npos) {
      fail(ErrorCode::invalidParameter, "field name '" + f + "' cannot be used in a file name");
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(outDir, ec);
  if (ec) fail(ErrorCode::io, "cannot create " + outDir.string() + ": " + ec.message());

  const SpatialGrid& g = *dataset.spatialGrid();
  const SliceOrientation o = options.orientation;
  const GridAxis& levelAxis = o == SliceOrientation::depth ? g.depth : g.lat;
  const Index levels = levelAxis.size();

  CinemaIndex index;
  index.directory = outDir;
  index.orientation = o;
  index.fields = fields;
  std::vector<ScalarVolume> volumes(fields.size());
  for (Index t = range.begin; t < range.end; ++t) {
    pool.parallelFor(fields.size(), [&](std::size_t f) {
      volumes[f] = loadField(dataset, t, fields[f], options.velocity, options.metric);
    });
    const std::size_t tasks = fields.size() * static_cast<std::size_t>(levels);
    pool.parallelFor(tasks, [&](std::size_t task) {
      const std::size_t f = task % fields.size();
      const Index level = static_cast<Index>(task / fields.size());
      writeFloatImage(outDir / cinemaFileName(t, level, fields[f], o), sliceImage(volumes[f], level, o));
    });
    for (Index level = 0; level < levels; ++level)
      for (const auto& field : fields) index.rows.push_back({t, level, levelAxis[level], field, cinemaFileName(t, level, field, o)});
  }

  std::ostringstream csv;
  csv << "time," << levelColumn(o) << ",field,FILE\n";
  for (const auto& row : index.rows) csv << row.time << ',' << fmt::format("{}", row.coordinate) << ',' << row.field << ',' << row.file << '\n';
  writeText(outDir / "data.csv", csv.str());

  std::vector<double> times;
  for (Index t = range.begin; t < range.end; ++t) times.push_back(dataset.grid().time[t]);
  const nlohmann::json meta = {
      {"version", kFormatVersion},
      {"encoder", "f32le-rgba"},
      {"orientation", orientationName(o)},
      {"row_order", o == SliceOrientation::depth ? "north-up" : "surface-up"},
      {"fields", fields},
      {"axes",
       {{"time", times}, {"time_index", {range.begin, range.end}}, {"depth", g.depth.coords()}, {"lat", g.lat.coords()},
        {"lon", g.lon.coords()}}},
      {"image_size", {{"width", g.nLon()}, {"height", o == SliceOrientation::depth ? g.nLat() : g.nDepth()}}},
      {"reference_full_scale_ratio", kReferenceFullScaleRatio}};
  writeText(outDir / "metadata.json", meta.dump(2) + "\n");
  return index;
}

CinemaIndex readCinemaIndex(const std::filesystem::path& directory) {
  std::ifstream meta(directory / "metadata.json");
  if (!meta) fail(ErrorCode::io, "cannot read " + (directory / "metadata.json").string());
  nlohmann::json j;
  try {
    meta >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::format, std::string("metadata.json: ") + e.what());
  }
  CinemaIndex index;
  index.directory = directory;
  index.orientation = j.value("orientation", "depth") == "vertical" ? SliceOrientation::vertical : SliceOrientation::depth;
  index.fields = j.value("fields", std::vector<std::string>{});
  const GridAxis levelAxis(AxisName::depth, j.at("axes").at(index.orientation == SliceOrientation::depth ? "depth" : "lat")
                                                 .get<std::vector<double>>());

  std::ifstream csv(directory / "data.csv");
  if (!csv) fail(ErrorCode::io, "cannot read " + (directory / "data.csv").string());
  std::string line;
  std::getline(csv, line);
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::istringstream fieldsIn(line);
    std::string t, coord, field, file;
    if (!std::getline(fieldsIn, t, ',') || !std::getline(fieldsIn, coord, ',') || !std::getline(fieldsIn, field, ',') ||
        !std::getline(fieldsIn, file)) {
      fail(ErrorCode::format, "malformed data.csv row: " + line);
    }
    CinemaRow row;
    row.time = std::stoll(t);
    row.coordinate = std::stod(coord);
    row.level = nearestIndex(levelAxis, row.coordinate);
    row.field = field;
    row.file = file;
    index.rows.push_back(std::move(row));
  }
  return index;
}

CompressionReport compressionReport(const Dataset& dataset, const CinemaIndex& index) {
  CompressionReport report;
  auto sizeOf = [](const std::filesystem::path& p) {
    std::error_code ec;
    const auto n = std::filesystem::file_size(p, ec);
    if (ec) fail(ErrorCode::io, "cannot stat " + p.string());
    return n;
  };
  for (const auto& row : index.rows) report.databaseBytes += sizeOf(index.directory / row.file);
  report.databaseBytes += sizeOf(index.directory / "data.csv") + sizeOf(index.directory / "metadata.json");
  report.sourceBytes = dataset.sourceBytes();
  report.ratio = report.sourceBytes ? static_cast<double>(report.databaseBytes) / static_cast<double>(report.sourceBytes) : 0.0;
  return report;
}

std::string compressionToJson(const CompressionReport& report) {
  return nlohmann::json{{"databaseBytes", report.databaseBytes},
                        {"sourceBytes", report.sourceBytes},
                        {"ratio", report.ratio},
                        {"reference_full_scale_ratio", kReferenceFullScaleRatio}}
      .dump(2);
}

}  // namespace oceanscope
