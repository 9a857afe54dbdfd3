#include "oceanscope/raw_format.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace oceanscope {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "raw format I/O assumes a little-endian host");

namespace {

class RawSource final : public DataSource {
 public:
  explicit RawSource(const fs::path& headerPath) : directory_(headerPath.parent_path()), headerPath_(headerPath) {
    std::ifstream in(headerPath);
    if (!in) fail(ErrorCode::io, "cannot open raw header " + headerPath.string());
    json header;
    try {
      in >> header;
    } catch (const json::exception& e) {
      fail(ErrorCode::format, headerPath.string() + ": " + e.what());
    }
    try {
      if (header.value("format", std::string()) != kRawFormatTag) {
        fail(ErrorCode::format, headerPath.string() + " is not an " + std::string(kRawFormatTag) + " header");
      }
      const auto& axes = header.at("axes");
      auto axis = [&](const char* key, AxisName name) {
        return GridAxis(name, axes.at(key).get<std::vector<double>>());
      };
      GridAxis time = axis("time", AxisName::time);
      std::vector<double> lon = axes.at("lon").get<std::vector<double>>();
      for (double& x : lon) x = normalizeLongitude(x);
      auto space = std::make_shared<const SpatialGrid>(
          SpatialGrid{axis("depth", AxisName::depth), axis("lat", AxisName::lat), GridAxis(AxisName::lon, lon)});
      grid_ = std::make_unique<Grid4D>(Grid4D{std::move(time), std::move(space)});
      const auto shape = header.at("shape").get<std::vector<Index>>();
      const auto expected = grid_->shape();
      if (shape.size() != 4 || !std::equal(shape.begin(), shape.end(), expected.begin())) {
        fail(ErrorCode::format, headerPath.string() + ": shape does not match axis lengths");
      }
      variables_ = header.at("variables").get<std::vector<std::string>>();
      if (header.contains("fill_value") && !header["fill_value"].is_null()) {
        fillValue_ = static_cast<float>(header["fill_value"].get<double>());
      }
    } catch (const json::exception& e) {
      fail(ErrorCode::format, headerPath.string() + ": " + e.what());
    }
  }

  const Grid4D& grid() const override { return *grid_; }
  const std::vector<std::string>& variables() const override { return variables_; }

  std::vector<float> read(const std::string& variable, Index t, const IndexWindow& w) const override {
    const fs::path blob = directory_ / rawBlobName(variable, t);
    std::ifstream in(blob, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open " + blob.string());
    const SpatialGrid& s = *grid_->space;
    std::vector<float> out(static_cast<std::size_t>(w.voxels()));
    const Index rowLength = w.j1 - w.j0;
    std::size_t cursor = 0;
    for (Index d = w.d0; d < w.d1; ++d) {
      for (Index i = w.i0; i < w.i1; ++i) {
        const auto offset = static_cast<std::streamoff>(((d * s.nLat() + i) * s.nLon() + w.j0) * 4);
        in.seekg(offset);
        in.read(reinterpret_cast<char*>(out.data() + cursor), static_cast<std::streamsize>(rowLength * 4));
        if (!in) fail(ErrorCode::io, "short read in " + blob.string());
        cursor += static_cast<std::size_t>(rowLength);
      }
    }
    if (fillValue_) {
      for (float& x : out) {
        if (x == *fillValue_) x = std::numeric_limits<float>::quiet_NaN();
      }
    }
    return out;
  }

  std::uintmax_t sourceBytes() const override {
    std::uintmax_t bytes = fs::file_size(headerPath_);
    for (const auto& v : variables_) {
      for (Index t = 0; t < grid_->nTime(); ++t) {
        std::error_code ec;
        const auto size = fs::file_size(directory_ / rawBlobName(v, t), ec);
        if (!ec) bytes += size;
      }
    }
    return bytes;
  }

  std::string description() const override { return headerPath_.string(); }

 private:
  fs::path directory_;
  fs::path headerPath_;
  std::unique_ptr<Grid4D> grid_;
  std::vector<std::string> variables_;
  std::optional<float> fillValue_;
};

fs::path resolveHeader(const fs::path& path) {
  if (fs::is_directory(path)) return path / kRawHeaderName;
  return path;
}

}  // namespace

std::string rawBlobName(const std::string& variable, Index step) {
  return variable + "_t" + std::to_string(step) + ".f32";
}

std::shared_ptr<const DataSource> openRaw(const fs::path& path) {
  const fs::path header = resolveHeader(path);
  if (!fs::exists(header)) fail(ErrorCode::io, "raw dataset header not found: " + header.string());
  return std::make_shared<RawSource>(header);
}

Dataset ingestRaw(const fs::path& path, std::vector<std::string> variables, const ClipSpec& clip) {
  return Dataset(openRaw(path), std::move(variables), clip);
}

fs::path writeRaw(const Dataset& dataset, const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) fail(ErrorCode::io, "cannot create " + directory.string() + ": " + ec.message());
  const SpatialGrid& s = *dataset.spatialGrid();
  std::vector<double> time;
  for (Index t = 0; t < dataset.timeSteps(); ++t) time.push_back(dataset.grid().time[t]);
  json header;
  header["format"] = kRawFormatTag;
  header["version"] = 1;
  header["axes"] = {{"time", time}, {"depth", s.depth.coords()}, {"lat", s.lat.coords()}, {"lon", s.lon.coords()}};
  header["shape"] = {dataset.timeSteps(), s.nDepth(), s.nLat(), s.nLon()};
  header["variables"] = dataset.variables();
  header["fill_value"] = nullptr;
  header["blob"] = "<variable>_t<step>.f32";

  for (const auto& variable : dataset.variables()) {
    for (Index t = 0; t < dataset.timeSteps(); ++t) {
      const ScalarVolume vol = dataset.loadTimeStep(t, variable);
      const fs::path blob = directory / rawBlobName(variable, t);
      std::ofstream out(blob, std::ios::binary | std::ios::trunc);
      out.write(reinterpret_cast<const char*>(vol.values().data()), static_cast<std::streamsize>(vol.size() * 4));
      if (!out) fail(ErrorCode::io, "write failed: " + blob.string());
    }
  }
  const fs::path headerPath = directory / kRawHeaderName;
  std::ofstream out(headerPath, std::ios::trunc);
  out << header.dump(2) << '\n';
  if (!out) fail(ErrorCode::io, "write failed: " + headerPath.string());
  return headerPath;
}

}  // namespace oceanscope
