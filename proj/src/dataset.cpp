#include "oceanscope/dataset.hpp"

#include <algorithm>
#include <chrono>

namespace oceanscope {

namespace {

std::pair<Index, Index> rangeWithin(const GridAxis& axis, double lo, double hi) {
  constexpr double tol = 1e-9;
  Index first = axis.size(), last = -1;
  for (Index k = 0; k < axis.size(); ++k) {
    if (axis[k] >= lo - tol && axis[k] <= hi + tol) {
      first = std::min(first, k);
      last = std::max(last, k);
    }
  }
  if (last < 0) {
    fail(ErrorCode::outOfDomain, std::string(toString(axis.name())) + " clip [" + std::to_string(lo) + ", " +
                                     std::to_string(hi) + "] selects no grid points");
  }
  return {first, last + 1};
}

std::vector<double> sliceCoords(const GridAxis& axis, Index begin, Index end) {
  return {axis.coords().begin() + begin, axis.coords().begin() + end};
}

Grid4D windowGrid(const Grid4D& full, const IndexWindow& w) {
  const SpatialGrid& s = *full.space;
  auto space = (w.d0 == 0 && w.d1 == s.nDepth() && w.i0 == 0 && w.i1 == s.nLat() && w.j0 == 0 && w.j1 == s.nLon())
                   ? full.space
                   : makeSpatialGrid(sliceCoords(s.depth, w.d0, w.d1), sliceCoords(s.lat, w.i0, w.i1),
                                     sliceCoords(s.lon, w.j0, w.j1));
  // An empty time window keeps a one-entry placeholder axis; Dataset::timeSteps() reports 0.
  const Index tEnd = std::min(std::max(w.t1, w.t0 + 1), full.nTime());
  const Index tBegin = std::min(w.t0, tEnd - 1);
  return Grid4D{GridAxis(AxisName::time, sliceCoords(full.time, tBegin, tEnd)), space};
}

IndexWindow clipWindow(const Grid4D& grid, const ClipSpec& clip) {
  clip.validate();
  const SpatialGrid& s = *grid.space;
  IndexWindow w;
  std::tie(w.j0, w.j1) = rangeWithin(s.lon, clip.lonMin, clip.lonMax);
  std::tie(w.i0, w.i1) = rangeWithin(s.lat, clip.latMin, clip.latMax);
  std::tie(w.d0, w.d1) = rangeWithin(s.depth, -std::numeric_limits<double>::infinity(), clip.maxDepth);
  if (clip.timeRange) {
    const TimeRange r = *clip.timeRange;
    if (r.begin < 0 || r.end > grid.nTime() || r.end < r.begin) {
      fail(ErrorCode::bounds, "time range [" + std::to_string(r.begin) + ", " + std::to_string(r.end) +
                                  ") outside dataset steps [0, " + std::to_string(grid.nTime()) + ")");
    }
    w.t0 = r.begin;
    w.t1 = r.end;
  } else {
    w.t0 = 0;
    w.t1 = grid.nTime();
  }
  return w;
}

class MemorySource final : public DataSource {
 public:
  MemorySource(Grid4D grid, std::map<std::string, std::vector<ScalarVolume>> data)
      : grid_(std::move(grid)), data_(std::move(data)) {
    for (const auto& [name, steps] : data_) {
      if (static_cast<Index>(steps.size()) != grid_.nTime()) {
        fail(ErrorCode::invalidInput, "variable '" + name + "' step count does not match time axis");
      }
      for (const auto& vol : steps) {
        if (!(vol.grid() == *grid_.space)) fail(ErrorCode::invalidInput, "variable '" + name + "' grid mismatch");
      }
      names_.push_back(name);
    }
  }

  const Grid4D& grid() const override { return grid_; }
  const std::vector<std::string>& variables() const override { return names_; }

  std::vector<float> read(const std::string& variable, Index t, const IndexWindow& w) const override {
    const auto& vol = data_.at(variable)[static_cast<std::size_t>(t)];
    std::vector<float> out;
    out.reserve(static_cast<std::size_t>(w.voxels()));
    for (Index d = w.d0; d < w.d1; ++d)
      for (Index i = w.i0; i < w.i1; ++i)
        for (Index j = w.j0; j < w.j1; ++j) out.push_back(vol(d, i, j));
    return out;
  }

  std::uintmax_t sourceBytes() const override {
    std::uintmax_t bytes = 0;
    for (const auto& [name, steps] : data_)
      for (const auto& v : steps) bytes += static_cast<std::uintmax_t>(v.size()) * sizeof(float);
    return bytes;
  }

  std::string description() const override { return "in-memory dataset"; }

 private:
  Grid4D grid_;
  std::map<std::string, std::vector<ScalarVolume>> data_;
  std::vector<std::string> names_;
};

/// A windowed base source plus extra variables defined on the window grid.
class OverlaySource final : public DataSource {
 public:
  OverlaySource(std::shared_ptr<const DataSource> base, IndexWindow baseWindow, Grid4D grid,
                std::vector<std::string> baseVariables, std::map<std::string, std::vector<ScalarVolume>> extra)
      : base_(std::move(base)), baseWindow_(baseWindow), grid_(std::move(grid)), extra_(std::move(extra)) {
    names_ = std::move(baseVariables);
    for (const auto& [name, steps] : extra_) {
      if (std::find(names_.begin(), names_.end(), name) == names_.end()) names_.push_back(name);
    }
  }

  const Grid4D& grid() const override { return grid_; }
  const std::vector<std::string>& variables() const override { return names_; }

  std::vector<float> read(const std::string& variable, Index t, const IndexWindow& w) const override {
    if (auto it = extra_.find(variable); it != extra_.end()) {
      const auto& vol = it->second[static_cast<std::size_t>(t)];
      std::vector<float> out;
      out.reserve(static_cast<std::size_t>(w.voxels()));
      for (Index d = w.d0; d < w.d1; ++d)
        for (Index i = w.i0; i < w.i1; ++i)
          for (Index j = w.j0; j < w.j1; ++j) out.push_back(vol(d, i, j));
      return out;
    }
    IndexWindow shifted = w;
    shifted.d0 += baseWindow_.d0;
    shifted.d1 += baseWindow_.d0;
    shifted.i0 += baseWindow_.i0;
    shifted.i1 += baseWindow_.i0;
    shifted.j0 += baseWindow_.j0;
    shifted.j1 += baseWindow_.j0;
    return base_->read(variable, t + baseWindow_.t0, shifted);
  }

  std::uintmax_t sourceBytes() const override { return base_->sourceBytes(); }
  std::string description() const override { return base_->description() + " + derived variables"; }

 private:
  std::shared_ptr<const DataSource> base_;
  IndexWindow baseWindow_;
  Grid4D grid_;
  std::map<std::string, std::vector<ScalarVolume>> extra_;
  std::vector<std::string> names_;
};

}  // namespace

void ClipSpec::validate() const {
  if (!(lonMin < lonMax)) fail(ErrorCode::invalidParameter, "clip requires lonMin < lonMax");
  if (!(latMin < latMax)) fail(ErrorCode::invalidParameter, "clip requires latMin < latMax");
  if (!(maxDepth > 0.0)) fail(ErrorCode::invalidParameter, "clip requires maxDepth > 0");
}

double normalizeLongitude(double lon) {
  if (lon >= -180.0 && lon < 180.0) return lon;
  double x = std::fmod(lon + 180.0, 360.0);
  if (x < 0.0) x += 360.0;
  return x - 180.0;
}

Dataset::Dataset(std::shared_ptr<const DataSource> source, std::vector<std::string> variables, const ClipSpec& clip)
    : Dataset(source, clipWindow(source->grid(), clip), std::move(variables)) {}

Dataset::Dataset(std::shared_ptr<const DataSource> source, IndexWindow window, std::vector<std::string> variables)
    : source_(std::move(source)),
      window_(window),
      grid_(windowGrid(source_->grid(), window)),
      log_(std::make_shared<TimingLog>()) {
  const auto& available = source_->variables();
  if (variables.empty()) variables = available;
  for (const auto& name : variables) {
    if (std::find(available.begin(), available.end(), name) == available.end()) {
      fail(ErrorCode::notFound, "variable '" + name + "' not found in " + source_->description());
    }
  }
  variables_ = std::move(variables);
}

Dataset Dataset::fromVolumes(GridAxis time, SpatialGridPtr grid,
                             std::map<std::string, std::vector<ScalarVolume>> variables) {
  auto source = std::make_shared<MemorySource>(Grid4D{std::move(time), std::move(grid)}, std::move(variables));
  return Dataset(source);
}

bool Dataset::hasVariable(std::string_view name) const {
  return std::find(variables_.begin(), variables_.end(), name) != variables_.end();
}

ScalarVolume Dataset::loadTimeStep(Index t, std::string_view variable) const {
  if (t < 0 || t >= timeSteps()) {
    fail(ErrorCode::bounds, "time step " + std::to_string(t) + " outside [0, " + std::to_string(timeSteps()) + ")");
  }
  if (!hasVariable(variable)) fail(ErrorCode::notFound, "variable '" + std::string(variable) + "' not in dataset");
  const auto start = std::chrono::steady_clock::now();
  IndexWindow w = window_;
  std::vector<float> raw = source_->read(std::string(variable), window_.t0 + t, w);
  ScalarVolume::Storage values = Eigen::Map<const ScalarVolume::Storage>(raw.data(), static_cast<Index>(raw.size()));
  ScalarVolume vol(grid_.space, std::move(values));
  if (vol.values().isInf().any()) {
    fail(ErrorCode::format, "variable '" + std::string(variable) + "' step " + std::to_string(t) +
                                " has infinite values");
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  {
    std::lock_guard lock(log_->mutex);
    log_->entries.push_back({t, std::string(variable), seconds});
  }
  return vol;
}

VectorVolume<float> Dataset::loadVelocity(Index t, const VelocityNames& names) const {
  VectorVolume<float> vel{loadTimeStep(t, names.u), loadTimeStep(t, names.v), std::nullopt};
  if (!names.w.empty()) vel.w = loadTimeStep(t, names.w);
  return vel;
}

std::vector<LoadTiming> Dataset::timingLog() const {
  std::lock_guard lock(log_->mutex);
  return log_->entries;
}

void Dataset::clearTimingLog() const {
  std::lock_guard lock(log_->mutex);
  log_->entries.clear();
}

Dataset Dataset::subset(std::vector<std::string> variables, const ClipSpec& clip) const {
  IndexWindow local = clipWindow(Grid4D{grid_.time, grid_.space}, clip);
  if (!clip.timeRange) {
    local.t0 = 0;
    local.t1 = timeSteps();
  }
  IndexWindow w;
  w.t0 = window_.t0 + local.t0;
  w.t1 = window_.t0 + local.t1;
  w.d0 = window_.d0 + local.d0;
  w.d1 = window_.d0 + local.d1;
  w.i0 = window_.i0 + local.i0;
  w.i1 = window_.i0 + local.i1;
  w.j0 = window_.j0 + local.j0;
  w.j1 = window_.j0 + local.j1;
  if (variables.empty()) variables = variables_;
  for (const auto& name : variables) {
    if (!hasVariable(name)) fail(ErrorCode::notFound, "variable '" + name + "' not in dataset");
  }
  return Dataset(source_, w, std::move(variables));
}

Dataset Dataset::withVariable(std::string name, std::vector<ScalarVolume> steps) const {
  if (static_cast<Index>(steps.size()) != timeSteps()) {
    fail(ErrorCode::invalidInput, "variable '" + name + "' needs one volume per time step");
  }
  for (const auto& vol : steps) {
    if (!(vol.grid() == *grid_.space)) fail(ErrorCode::invalidInput, "variable '" + name + "' grid mismatch");
  }
  std::map<std::string, std::vector<ScalarVolume>> extra;
  extra.emplace(name, std::move(steps));
  auto overlay = std::make_shared<OverlaySource>(source_, window_, grid_, variables_, std::move(extra));
  IndexWindow full;
  full.t0 = 0;
  full.t1 = timeSteps();
  full.d1 = grid_.space->nDepth();
  full.i1 = grid_.space->nLat();
  full.j1 = grid_.space->nLon();
  auto vars = variables_;
  if (!hasVariable(name)) vars.push_back(name);
  return Dataset(overlay, full, std::move(vars));
}

ScalarVolume deriveFromDataset(const Dataset& dataset, Index t, const DerivedFieldKind& kind,
                               const VelocityNames& names, Metric metric) {
  if (kind.kind == DerivedFieldKind::Kind::userScalar) {
    if (!dataset.hasVariable(kind.name)) {
      fail(ErrorCode::notFound, "user scalar '" + kind.name + "' not in dataset");
    }
    return dataset.loadTimeStep(t, kind.name);
  }
  for (const auto& n : {names.u, names.v}) {
    if (!dataset.hasVariable(n)) fail(ErrorCode::invalidInput, "missing velocity component '" + n + "'");
  }
  return derivedField(dataset.loadVelocity(t, names), kind, metric);
}

ScalarVolume loadField(const Dataset& dataset, Index t, std::string_view name, const VelocityNames& names,
                       Metric metric) {
  if (dataset.hasVariable(name)) return dataset.loadTimeStep(t, name);
  DerivedFieldKind kind;
  try {
    kind = DerivedFieldKind::parse(name);
  } catch (const Error&) {
    fail(ErrorCode::notFound, "field '" + std::string(name) + "' is neither a variable nor a derived field");
  }
  return deriveFromDataset(dataset, t, kind, names, metric);
}

}  // namespace oceanscope
