#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oceanscope/dataset.hpp"
#include "oceanscope/derived.hpp"
#include "oceanscope/grid.hpp"

namespace oceanscope {

class WorkerPool;

/// Point as (lon, lat, depth).
using GeoPoint = Eigen::Vector3d;

struct SeedRegion {
  double lonMin = -180.0, lonMax = 180.0;
  double latMin = -90.0, latMax = 90.0;
  double depthMin = 0.0, depthMax = std::numeric_limits<double>::infinity();

  bool containsVoxel(const SpatialGrid& grid, Index d, Index i, Index j) const;
};

struct SeedSpec {
  enum class Strategy { uniform, weighted };

  Index count = 100;
  Strategy strategy = Strategy::uniform;
  DerivedFieldKind weight = DerivedFieldKind::speed();  // weighted only
  std::optional<SeedRegion> region;
  std::uint64_t rngSeed = 0;

  void validate(const SpatialGrid& grid) const;
};

/// Seeds over the ocean voxels of `field`. Uniform: voxels drawn uniformly by
/// rejection. Weighted: voxels drawn with probability max(field, 0) (NaN as
/// 0). Each seed is jittered uniformly inside its voxel's cell, which spans
/// halfway to the neighboring nodes and stops at the domain edge; jitter that
/// would put land in the interpolation stencil is redrawn.
std::vector<GeoPoint> placeSeeds(const ScalarVolume& field, const SeedSpec& spec);

/// Same, with the weight field derived from velocity according to spec.weight.
std::vector<GeoPoint> placeSeeds(const VectorVolume<float>& vel, const SeedSpec& spec, Metric metric = Metric::spherical);

enum class Direction { forward, backward, both };

Direction parseDirection(std::string_view text);

struct IntegrationParams {
  double stepSize = 0.01;  // arc length per step, degrees (Cartesian: coordinate units)
  Index maxSteps = 1000;
  Direction direction = Direction::forward;
  double terminationSpeed = 1e-9;  // m/s
  double timeStep = 0.1;  // pathlines: time-axis units per step
  Metric metric = Metric::spherical;

  void validate() const;
};

struct Polyline {
  std::vector<GeoPoint> points;
  std::vector<double> times;   // pathlines only
  std::vector<double> speeds;  // sampled speed at each point
  Index seedIndex = 0;

  /// Along-track length: meters (spherical) or coordinate units (Cartesian).
  double length(Metric metric) const;
  double meanSpeed() const;
};

/// RK4 along the normalized horizontal velocity at the depth level nearest
/// the seed. Stops after maxSteps, on leaving the domain, entering land or
/// reaching a speed at or below terminationSpeed.
Polyline streamline(const VectorVolume<float>& vel, const GeoPoint& seed, const IntegrationParams& params);

std::vector<Polyline> streamlines(const VectorVolume<float>& vel, const std::vector<GeoPoint>& seeds,
                                  const IntegrationParams& params, WorkerPool* pool = nullptr);

/// Time-resolved velocity: trilinear in space, linear in time.
struct VelocitySeries {
  std::vector<VectorVolume<float>> steps;
  std::vector<double> times;
};

/// Loads every step of `range` up front.
VelocitySeries preloadVelocity(const Dataset& dataset, TimeRange range, const VelocityNames& names = {},
                               WorkerPool* pool = nullptr);

/// RK4 particle trajectories through the time-interpolated field, from the
/// first step (forward) or the last step (backward) of the series. Particles
/// stop at the series end, on leaving the domain or entering land, or after
/// maxSteps; momentary stagnation does not stop them.
std::vector<Polyline> pathlines(const VelocitySeries& series, const std::vector<GeoPoint>& seeds,
                                const IntegrationParams& params, WorkerPool* pool = nullptr);

std::vector<Polyline> pathlines(const Dataset& dataset, const std::vector<GeoPoint>& seeds,
                                const IntegrationParams& params, TimeRange range, WorkerPool* pool = nullptr,
                                const VelocityNames& names = {});

/// FeatureCollection of LineStrings with {seedIndex, length, meanSpeed}.
std::string polylinesToGeoJson(const std::vector<Polyline>& lines, Metric metric);

}  // namespace oceanscope
