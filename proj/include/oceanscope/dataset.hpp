#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oceanscope/derived.hpp"
#include "oceanscope/grid.hpp"

namespace oceanscope {

/// Geographic box, depth cutoff and inclusive time-step range.
struct ClipSpec {
  double lonMin = -180.0;
  double lonMax = 180.0;
  double latMin = -90.0;
  double latMax = 90.0;
  double maxDepth = std::numeric_limits<double>::infinity();
  std::optional<TimeRange> timeRange;

  void validate() const;
};

/// Half-open index ranges into a source grid.
struct IndexWindow {
  Index t0 = 0, t1 = 0;
  Index d0 = 0, d1 = 0;
  Index i0 = 0, i1 = 0;
  Index j0 = 0, j1 = 0;

  Index voxels() const { return (d1 - d0) * (i1 - i0) * (j1 - j0); }
};

/// Storage backend. Coordinates are already normalized: longitudes in
/// [-180, 180), depth positive-down, every axis strictly increasing.
class DataSource {
 public:
  virtual ~DataSource() = default;

  virtual const Grid4D& grid() const = 0;
  virtual const std::vector<std::string>& variables() const = 0;

  /// Values of `variable` at step t over the spatial part of `window`,
  /// row-major (depth, lat, lon). Fill values come back as NaN.
  virtual std::vector<float> read(const std::string& variable, Index t, const IndexWindow& window) const = 0;

  virtual std::uintmax_t sourceBytes() const = 0;
  virtual std::string description() const = 0;
};

struct LoadTiming {
  Index step;
  std::string variable;
  double seconds;
};

struct VelocityNames {
  std::string u = "u";
  std::string v = "v";
  std::string w;  // empty: no vertical component
};

/// Lazily-readable, clipped view of a data source. Copies share the source
/// and the load-timing log. Safe for concurrent loadTimeStep calls.
class Dataset {
 public:
  Dataset(std::shared_ptr<const DataSource> source, std::vector<std::string> variables = {},
          const ClipSpec& clip = {});

  static Dataset fromVolumes(GridAxis time, SpatialGridPtr grid,
                             std::map<std::string, std::vector<ScalarVolume>> variables);

  const Grid4D& grid() const { return grid_; }
  const SpatialGridPtr& spatialGrid() const { return grid_.space; }
  Index timeSteps() const { return window_.t1 - window_.t0; }
  TimeRange allSteps() const { return {0, timeSteps()}; }

  const std::vector<std::string>& variables() const { return variables_; }
  bool hasVariable(std::string_view name) const;

  /// One 3D volume; every call is timed into the load log.
  ScalarVolume loadTimeStep(Index t, std::string_view variable) const;

  VectorVolume<float> loadVelocity(Index t, const VelocityNames& names = {}) const;

  std::vector<LoadTiming> timingLog() const;
  void clearTimingLog() const;

  std::uintmax_t sourceBytes() const { return source_->sourceBytes(); }
  std::string description() const { return source_->description(); }

  /// Further variable selection and clipping, relative to this view.
  Dataset subset(std::vector<std::string> variables, const ClipSpec& clip) const;

  /// Same view plus an in-memory variable (one volume per time step).
  Dataset withVariable(std::string name, std::vector<ScalarVolume> steps) const;

 private:
  struct TimingLog {
    std::mutex mutex;
    std::vector<LoadTiming> entries;
  };

  Dataset(std::shared_ptr<const DataSource> source, IndexWindow window, std::vector<std::string> variables);

  std::shared_ptr<const DataSource> source_;
  IndexWindow window_;
  Grid4D grid_;
  std::vector<std::string> variables_;
  std::shared_ptr<TimingLog> log_;
};

/// Derived or user field for one time step. userScalar loads the named
/// variable; the others are computed from velocity.
ScalarVolume deriveFromDataset(const Dataset& dataset, Index t, const DerivedFieldKind& kind,
                               const VelocityNames& names = {}, Metric metric = Metric::spherical);

/// A dataset variable, or else a derived field name (speed, vorticity, curl,
/// okubo-weiss) computed from velocity.
ScalarVolume loadField(const Dataset& dataset, Index t, std::string_view name, const VelocityNames& names = {},
                       Metric metric = Metric::spherical);

/// Normalizes a longitude to [-180, 180).
double normalizeLongitude(double lon);

}  // namespace oceanscope
