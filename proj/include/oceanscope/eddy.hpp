#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "oceanscope/flow.hpp"

namespace oceanscope {

class WorkerPool;

/// A strict local speed minimum and its merge-tree persistence.
struct PersistencePair {
  Index lat = 0;  // voxel indices in the slice
  Index lon = 0;
  double birthValue = 0.0;
  double deathValue = std::numeric_limits<double>::infinity();
  double persistence = std::numeric_limits<double>::infinity();
};

/// 4-neighborhood minima of the horizontal speed on one depth level, under
/// the total order (speed, voxel index), paired by the elder rule over the
/// sublevel-set merge tree. The oldest minimum of each connected ocean region
/// never dies and gets infinite persistence. Minima on the slice edge or
/// next to land are not reported.
std::vector<PersistencePair> speedMinima(const VectorVolume<float>& vel, Index depth);

/// Same on a bare speed slice (NaN = land).
std::vector<PersistencePair> speedMinima(const Eigen::Ref<const ScalarVolume::SliceArray>& speed);

/// Pairs with persistence >= threshold.
std::vector<PersistencePair> simplifyMinima(const std::vector<PersistencePair>& pairs, double threshold);

struct EddyParams {
  double stepFraction = 0.25;  // integration step as a fraction of the grid spacing
  double loopsBudget = 3.0;    // streamline budget in circumferences of the seed radius
  double closureFraction = 0.2;
  std::optional<double> persistenceThreshold;  // default: 10% of the slice speed range
  std::optional<double> rMax;                  // voxels; default: distance to slice edge - 1
  double radialTolerance = 0.5;                // voxels
  double seedOffset = 1.5;                     // winding-test seed, voxels east of the candidate
  int n = 3;                                   // cross-depth merge radius, voxels
  Metric metric = Metric::spherical;

  void validate() const;
};

struct WindingResult {
  bool pass = false;
  double windingAngle = 0.0;  // radians, signed (counterclockwise > 0)
  int quadrantsVisited = 0;
  std::string reason;
  Polyline streamline;
};

/// Streamline seeded seedOffset voxels east of (lat, lon); passes when it
/// visits all four quadrants of the frame centered at the candidate.
WindingResult windingTest(const VectorVolume<float>& vel, Index depth, Index lat, Index lon, const EddyParams& params);

/// Signed angle swept by the position vector of `line` around `center`.
double windingAngle(const Polyline& line, const GeoPoint& center, Metric metric);

inline constexpr int kRadialAxes = 8;

struct RadialSearch {
  double radiusVoxels = 0.0;  // 0 when nothing passed on this axis
  double radius = 0.0;        // meters (Cartesian: coordinate units)
  int probes = 0;             // bisection probes, excluding the two endpoint checks
  bool domainLimited = false;
  std::optional<Polyline> streamline;
};

struct EddyDescriptor {
  GeoPoint center{0, 0, 0};  // (lon, lat, depth)
  Index depthIndex = 0, latIndex = 0, lonIndex = 0;
  double coreSpeed = 0.0;
  double persistence = 0.0;
  std::array<double, 2> depthExtent{0, 0};  // meters
  Index depthLevels = 1;
  std::array<double, kRadialAxes> boundaryRadii{};  // E, NE, N, NW, W, SW, S, SE
  std::array<double, kRadialAxes> radiiVoxels{};
  std::array<int, kRadialAxes> probes{};
  double windingAngle = 0.0;
  std::vector<Polyline> streamlines;
};

/// True when the streamline from `seed` sweeps a full turn around `center`
/// and its end point after that turn lies within closureFraction·r of the seed.
bool closesLoop(const VectorVolume<float>& vel, Index depth, const GeoPoint& center, const GeoPoint& seed,
                double radiusVoxels, const EddyParams& params, Polyline* accepted = nullptr);

/// Radial bisection along the 8 axes for the largest radius whose streamline
/// closes a loop.
EddyDescriptor eddyBoundary(const VectorVolume<float>& vel, Index depth, Index lat, Index lon, const EddyParams& params);

/// Largest passing radius on one axis (unit index-space direction).
RadialSearch radialSearch(const VectorVolume<float>& vel, Index depth, Index lat, Index lon, double dirLat,
                          double dirLon, double rMax, const EddyParams& params);

/// All eddies of one time step: per slice minima, simplification, winding
/// test and boundary search; slice results within n voxels on adjacent depth
/// levels are merged into columns.
std::vector<EddyDescriptor> detectEddies(const VectorVolume<float>& vel, const EddyParams& params,
                                         WorkerPool* pool = nullptr);

std::string eddiesToJson(const std::vector<EddyDescriptor>& eddies);
std::string eddiesToGeoJson(const std::vector<EddyDescriptor>& eddies, Metric metric);

}  // namespace oceanscope
