#include "oceanscope/netcdf_reader.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <mutex>

#ifdef OCEANSCOPE_HAVE_NETCDF
#include "netcdf_api.hpp"
#endif

namespace oceanscope {

namespace fs = std::filesystem;

#ifndef OCEANSCOPE_HAVE_NETCDF

bool netcdfAvailable() { return false; }

Dataset ingestNetCDF(const fs::path& path, std::vector<std::string>, const ClipSpec&) {
  fail(ErrorCode::io, "NetCDF support not built; cannot read " + path.string());
}

#else

bool netcdfAvailable() { return true; }

namespace {

// libnetcdf is not re-entrant.
std::recursive_mutex& libraryMutex() {
  static std::recursive_mutex m;
  return m;
}

void check(int status, const std::string& what) {
  if (status != 0) fail(ErrorCode::format, what + ": " + nc_strerror(status));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

class NcFile {
 public:
  explicit NcFile(const fs::path& path) : path_(path.string()) {
    const int status = nc_open(path_.c_str(), nc::kNoWrite, &id_);
    if (status != 0) fail(ErrorCode::io, "cannot open NetCDF " + path_ + ": " + nc_strerror(status));
  }
  ~NcFile() {
    std::lock_guard lock(libraryMutex());
    nc_close(id_);
  }
  NcFile(const NcFile&) = delete;
  NcFile& operator=(const NcFile&) = delete;

  int id() const { return id_; }
  const std::string& path() const { return path_; }

  std::optional<int> varId(const std::string& name) const {
    int varid = -1;
    if (nc_inq_varid(id_, name.c_str(), &varid) != 0) return std::nullopt;
    return varid;
  }

  std::optional<std::string> textAttribute(int varid, const char* name) const {
    nc_type type = 0;
    std::size_t len = 0;
    if (nc_inq_att(id_, varid, name, &type, &len) != 0 || type != 2 /* NC_CHAR */) return std::nullopt;
    std::string value(len, '\0');
    check(nc_get_att_text(id_, varid, name, value.data()), path_ + " attribute " + name);
    while (!value.empty() && value.back() == '\0') value.pop_back();
    return value;
  }

  std::optional<double> numberAttribute(int varid, const char* name) const {
    nc_type type = 0;
    std::size_t len = 0;
    if (nc_inq_att(id_, varid, name, &type, &len) != 0 || type == 2 || len < 1) return std::nullopt;
    std::vector<double> values(len);
    check(nc_get_att_double(id_, varid, name, values.data()), path_ + " attribute " + name);
    return values.front();
  }

  std::vector<int> dimIds(int varid) const {
    int ndims = 0;
    check(nc_inq_varndims(id_, varid, &ndims), path_);
    std::vector<int> dims(static_cast<std::size_t>(ndims));
    if (ndims > 0) check(nc_inq_vardimid(id_, varid, dims.data()), path_);
    return dims;
  }

  std::string dimName(int dimid) const {
    std::array<char, nc::kMaxName + 1> buffer{};
    check(nc_inq_dimname(id_, dimid, buffer.data()), path_);
    return buffer.data();
  }

  std::size_t dimLength(int dimid) const {
    std::size_t len = 0;
    check(nc_inq_dimlen(id_, dimid, &len), path_);
    return len;
  }

  std::vector<double> readAll(int varid, std::size_t count) const {
    std::vector<double> values(count);
    check(nc_get_var_double(id_, varid, values.data()), path_);
    return values;
  }

 private:
  std::string path_;
  int id_ = -1;
};

/// Guesses the role of a dimension from its coordinate variable (CF axis,
/// standard_name, units) and falls back to common dimension names.
std::optional<AxisName> classifyDimension(const NcFile& file, const std::string& dim) {
  if (auto varid = file.varId(dim)) {
    if (auto axis = file.textAttribute(*varid, "axis")) {
      const std::string a = lower(*axis);
      if (a == "t") return AxisName::time;
      if (a == "z") return AxisName::depth;
      if (a == "y") return AxisName::lat;
      if (a == "x") return AxisName::lon;
    }
    if (auto sn = file.textAttribute(*varid, "standard_name")) {
      const std::string s = lower(*sn);
      if (s == "time") return AxisName::time;
      if (s == "depth" || s == "height" || s == "altitude") return AxisName::depth;
      if (s == "latitude") return AxisName::lat;
      if (s == "longitude") return AxisName::lon;
    }
    if (auto units = file.textAttribute(*varid, "units")) {
      const std::string u = lower(*units);
      if (u.find(" since ") != std::string::npos) return AxisName::time;
      if (u == "degrees_north" || u == "degree_north" || u == "degrees_n") return AxisName::lat;
      if (u == "degrees_east" || u == "degree_east" || u == "degrees_e") return AxisName::lon;
    }
  }
  const std::string n = lower(dim);
  if (n == "time" || n == "t" || n == "ocean_time" || n == "time_counter") return AxisName::time;
  if (n == "depth" || n == "z" || n == "lev" || n == "level" || n == "deptht" || n == "depthu") return AxisName::depth;
  if (n == "lat" || n == "latitude" || n == "y" || n == "nav_lat") return AxisName::lat;
  if (n == "lon" || n == "longitude" || n == "x" || n == "nav_lon") return AxisName::lon;
  return std::nullopt;
}

struct AxisLayout {
  std::string dimName;
  std::size_t length = 1;
  bool present = false;
  bool reversed = false;
  std::vector<double> coords;
};

struct VariableCoding {
  int varid = -1;
  std::optional<double> fill;
  std::optional<double> missing;
  double scale = 1.0;
  double offset = 0.0;
};

class NetCDFSource final : public DataSource {
 public:
  NetCDFSource(const fs::path& path, std::vector<std::string> variables) : file_(path) {
    if (variables.empty()) fail(ErrorCode::invalidInput, "NetCDF ingest needs at least one variable name");
    std::vector<int> referenceDims;
    for (const auto& name : variables) {
      auto varid = file_.varId(name);
      if (!varid) fail(ErrorCode::notFound, "variable '" + name + "' not found in " + file_.path());
      VariableCoding coding;
      coding.varid = *varid;
      coding.fill = file_.numberAttribute(*varid, "_FillValue");
      coding.missing = file_.numberAttribute(*varid, "missing_value");
      coding.scale = file_.numberAttribute(*varid, "scale_factor").value_or(1.0);
      coding.offset = file_.numberAttribute(*varid, "add_offset").value_or(0.0);
      const auto dims = file_.dimIds(*varid);
      if (referenceDims.empty()) {
        referenceDims = dims;
      } else if (dims != referenceDims) {
        fail(ErrorCode::format, "variable '" + name + "' dimensions differ from '" + variables.front() + "'");
      }
      coding_.emplace(name, coding);
    }
    variables_ = std::move(variables);
    layoutAxes(referenceDims);
  }

  const Grid4D& grid() const override { return *grid_; }
  const std::vector<std::string>& variables() const override { return variables_; }

  std::vector<float> read(const std::string& variable, Index t, const IndexWindow& w) const override {
    const VariableCoding& coding = coding_.at(variable);
    // Map the normalized window back to file index space.
    auto fileRange = [](const AxisLayout& a, Index begin, Index end) -> std::pair<std::size_t, std::size_t> {
      const auto n = static_cast<Index>(a.length);
      if (a.reversed) return {static_cast<std::size_t>(n - end), static_cast<std::size_t>(end - begin)};
      return {static_cast<std::size_t>(begin), static_cast<std::size_t>(end - begin)};
    };
    std::vector<std::size_t> start, count;
    if (time_.present) {
      auto [s, c] = fileRange(time_, t, t + 1);
      start.push_back(s);
      count.push_back(c);
    }
    if (depth_.present) {
      auto [s, c] = fileRange(depth_, w.d0, w.d1);
      start.push_back(s);
      count.push_back(c);
    }
    for (const auto* a : {&lat_, &lon_}) {
      const Index b = a == &lat_ ? w.i0 : w.j0;
      const Index e = a == &lat_ ? w.i1 : w.j1;
      auto [s, c] = fileRange(*a, b, e);
      start.push_back(s);
      count.push_back(c);
    }
    const Index nd = w.d1 - w.d0, ni = w.i1 - w.i0, nj = w.j1 - w.j0;
    std::vector<double> raw(static_cast<std::size_t>(nd * ni * nj));
    {
      std::lock_guard lock(libraryMutex());
      check(nc_get_vara_double(file_.id(), coding.varid, start.data(), count.data(), raw.data()),
            file_.path() + " read " + variable);
    }
    std::vector<float> out(raw.size());
    for (Index d = 0; d < nd; ++d) {
      const Index fd = depth_.reversed ? nd - 1 - d : d;
      for (Index i = 0; i < ni; ++i) {
        const Index fi = lat_.reversed ? ni - 1 - i : i;
        for (Index j = 0; j < nj; ++j) {
          const Index fj = lon_.reversed ? nj - 1 - j : j;
          const double value = raw[static_cast<std::size_t>((fd * ni + fi) * nj + fj)];
          const bool isFill = (coding.fill && value == *coding.fill) || (coding.missing && value == *coding.missing);
          out[static_cast<std::size_t>((d * ni + i) * nj + j)] =
              isFill || std::isnan(value) ? std::numeric_limits<float>::quiet_NaN()
              : (coding.scale == 1.0 && coding.offset == 0.0)
                  ? static_cast<float>(value)
                  : static_cast<float>(value * coding.scale + coding.offset);
        }
      }
    }
    return out;
  }

  std::uintmax_t sourceBytes() const override { return fs::file_size(file_.path()); }
  std::string description() const override { return file_.path(); }

 private:
  void layoutAxes(const std::vector<int>& dims) {
    std::vector<AxisName> roles;
    for (int dim : dims) {
      const std::string name = file_.dimName(dim);
      auto role = classifyDimension(file_, name);
      if (!role) fail(ErrorCode::format, "cannot identify dimension '" + name + "' in " + file_.path());
      roles.push_back(*role);
      AxisLayout& a = layoutFor(*role);
      a.dimName = name;
      a.length = file_.dimLength(dim);
      a.present = true;
    }
    const std::vector<AxisName> full{AxisName::time, AxisName::depth, AxisName::lat, AxisName::lon};
    const std::vector<AxisName> surface{AxisName::time, AxisName::lat, AxisName::lon};
    if (roles != full && roles != surface) {
      fail(ErrorCode::format, file_.path() + ": variables must have dimensions (time, depth, lat, lon) or (time, lat, lon)");
    }
    loadCoords(time_, AxisName::time);
    loadCoords(depth_, AxisName::depth);
    loadCoords(lat_, AxisName::lat);
    loadCoords(lon_, AxisName::lon);
    auto space = std::make_shared<const SpatialGrid>(SpatialGrid{GridAxis(AxisName::depth, depth_.coords),
                                                                 GridAxis(AxisName::lat, lat_.coords),
                                                                 GridAxis(AxisName::lon, lon_.coords)});
    grid_ = std::make_unique<Grid4D>(Grid4D{GridAxis(AxisName::time, time_.coords), std::move(space)});
  }

  AxisLayout& layoutFor(AxisName role) {
    switch (role) {
      case AxisName::time: return time_;
      case AxisName::depth: return depth_;
      case AxisName::lat: return lat_;
      case AxisName::lon: return lon_;
    }
    return time_;
  }

  void loadCoords(AxisLayout& a, AxisName role) {
    if (!a.present) {
      a.coords = {0.0};
      return;
    }
    auto varid = file_.varId(a.dimName);
    if (varid) {
      a.coords = file_.readAll(*varid, a.length);
    } else {
      a.coords.resize(a.length);
      for (std::size_t k = 0; k < a.length; ++k) a.coords[k] = static_cast<double>(k);
    }
    if (role == AxisName::depth && varid) {
      if (auto positive = file_.textAttribute(*varid, "positive"); positive && lower(*positive) == "up") {
        for (double& z : a.coords) z = -z;
      }
    }
    if (role == AxisName::lon) {
      for (double& x : a.coords) x = normalizeLongitude(x);
    }
    if (a.coords.size() > 1 && a.coords.front() > a.coords.back() && role != AxisName::time) {
      std::reverse(a.coords.begin(), a.coords.end());
      a.reversed = true;
    }
    for (std::size_t k = 1; k < a.coords.size(); ++k) {
      if (!(a.coords[k] > a.coords[k - 1])) {
        fail(ErrorCode::format, std::string(toString(role)) + " coordinate '" + a.dimName + "' in " + file_.path() +
                                    " is not monotone");
      }
    }
  }

  NcFile file_;
  std::vector<std::string> variables_;
  std::map<std::string, VariableCoding> coding_;
  AxisLayout time_, depth_, lat_, lon_;
  std::unique_ptr<Grid4D> grid_;
};

}  // namespace

Dataset ingestNetCDF(const fs::path& path, std::vector<std::string> variables, const ClipSpec& clip) {
  std::shared_ptr<const DataSource> source;
  {
    std::lock_guard lock(libraryMutex());
    source = std::make_shared<NetCDFSource>(path, variables);
  }
  return Dataset(std::move(source), std::move(variables), clip);
}

#endif

}  // namespace oceanscope
