#include "oceanscope/synthetic.hpp"

#include <cmath>
#include <map>

namespace oceanscope::synthetic {

SpatialGridPtr cartesianGrid(Index n, double halfWidth, Index depths) {
  const double step = n > 1 ? 2.0 * halfWidth / static_cast<double>(n - 1) : 1.0;
  auto axis = linspaceStep(-halfWidth, step, n);
  return makeSpatialGrid(linspaceStep(1.0, 1.0, depths), axis, axis);
}

SpatialGridPtr indexGrid(Index depths, Index lats, Index lons) {
  return makeSpatialGrid(linspaceStep(0.0, 1.0, depths), linspaceStep(0.0, 1.0, lats), linspaceStep(0.0, 1.0, lons));
}

GridAxis stepAxis(Index steps) { return GridAxis(AxisName::time, linspaceStep(0.0, 1.0, steps)); }

BinaryVolume boxMask(const SpatialGridPtr& grid, Index d0, Index d1, Index i0, Index i1, Index j0, Index j1) {
  BinaryVolume mask(grid, 0);
  for (Index d = std::max<Index>(d0, 0); d < std::min(d1, grid->nDepth()); ++d)
    for (Index i = std::max<Index>(i0, 0); i < std::min(i1, grid->nLat()); ++i)
      for (Index j = std::max<Index>(j0, 0); j < std::min(j1, grid->nLon()); ++j) mask(d, i, j) = 1;
  return mask;
}

ScalarVolume boxField(const SpatialGridPtr& grid, Index d0, Index d1, Index i0, Index i1, Index j0, Index j1,
                      float inside, float outside) {
  const BinaryVolume mask = boxMask(grid, d0, d1, i0, i1, j0, j1);
  ScalarVolume field(grid, outside);
  field.values() = (mask.values() != 0).select(inside, field.values());
  return field;
}

namespace {

constexpr double kMetersPerDegree = kEarthRadius * kDegToRad;

/// Salinity of one blob: 33.5 + 3·exp(-ρ²/r²), where ρ is the voxel
/// distance to the center, so the >= 35 psu core has radius 0.83·r.
double blob(double i, double j, double ci, double cj, double r) {
  const double rho2 = (i - ci) * (i - ci) + (j - cj) * (j - cj);
  return 3.0 * std::exp(-rho2 / (r * r));
}

}  // namespace

Dataset translatingBlobFixture(const FixtureSpec& spec) {
  if (spec.depths < 1 || spec.lats < 8 || spec.lons < 8 || spec.steps < 1) {
    fail(ErrorCode::invalidParameter, "fixture needs at least 1 depth, 8×8 horizontal points and 1 step");
  }
  const SpatialGridPtr grid = makeSpatialGrid(linspaceStep(spec.depthStep, spec.depthStep, spec.depths),
                                              linspaceStep(spec.lat0, spec.spacing, spec.lats),
                                              linspaceStep(spec.lon0, spec.spacing, spec.lons));
  const double sy = static_cast<double>(spec.lats) / 32.0;  // keeps features proportional to the grid
  const double sx = static_cast<double>(spec.lons) / 32.0;
  const double sr = std::sqrt(sx * sy);
  const Index landRows = std::max<Index>(1, spec.lats / 8), landCols = std::max<Index>(1, spec.lons / 8);

  std::map<std::string, std::vector<ScalarVolume>> vars;
  const double latc0 = grid->lat[spec.lats / 2], lonc0 = grid->lon[spec.lons / 2];
  const double rc = 4.0 * sr * spec.spacing * kMetersPerDegree;  // eddy core radius, meters
  const double gamma = 0.6 * 2.0 * kPi * rc / 0.638;              // peak azimuthal speed ~0.6 m/s

  for (Index t = 0; t < spec.steps; ++t) {
    ScalarVolume sal(grid), temp(grid), u(grid), v(grid);
    const double tt = static_cast<double>(t);
    // Eddy center drifts east by a quarter voxel per step.
    const double lonc = lonc0 + 0.25 * tt * spec.spacing;
    for (Index d = 0; d < spec.depths; ++d) {
      const double z = grid->depth[d];
      const double shrink = 1.0 - 0.4 * static_cast<double>(d) / static_cast<double>(std::max<Index>(spec.depths - 1, 1));
      const double decay = std::exp(-z / 150.0);
      for (Index i = 0; i < spec.lats; ++i) {
        for (Index j = 0; j < spec.lons; ++j) {
          if (spec.landCorner && i >= spec.lats - landRows && j < landCols) {
            const float nan = std::numeric_limits<float>::quiet_NaN();
            sal(d, i, j) = temp(d, i, j) = u(d, i, j) = v(d, i, j) = nan;
            continue;
          }
          const double fi = static_cast<double>(i), fj = static_cast<double>(j);
          double s = 33.5;
          s += blob(fi, fj, (8.0 + tt) * sy, (8.0 + tt) * sx, 4.5 * sr * shrink);
          s += blob(fi, fj, 22.0 * sy, (18.0 + tt) * sx, 3.5 * sr * shrink);
          sal(d, i, j) = static_cast<float>(s);
          temp(d, i, j) = static_cast<float>(29.0 - 0.04 * z + 0.5 * std::sin(0.3 * fj + 0.2 * tt) * decay);
          const double x = (grid->lon[j] - lonc) * std::cos(latc0 * kDegToRad) * kMetersPerDegree;
          const double y = (grid->lat[i] - latc0) * kMetersPerDegree;
          const Eigen::Vector2d uv = lambOseenVelocity(x, y, gamma, rc, 0.0, 0.0) * decay;
          u(d, i, j) = static_cast<float>(uv[0]);
          v(d, i, j) = static_cast<float>(uv[1]);
        }
      }
    }
    vars["salinity"].push_back(std::move(sal));
    if (spec.temperature) vars["temperature"].push_back(std::move(temp));
    if (spec.velocity) {
      vars["u"].push_back(std::move(u));
      vars["v"].push_back(std::move(v));
    }
  }
  return Dataset::fromVolumes(stepAxis(spec.steps), grid, std::move(vars));
}

Dataset filamentFixture() {
  const SpatialGridPtr grid =
      makeSpatialGrid(linspaceStep(1.0, 1.0, 300), linspaceStep(15.0, 0.25, 21), linspaceStep(86.0, 0.25, 21));
  std::map<std::string, std::vector<ScalarVolume>> vars;
  for (Index t = 0; t < 2; ++t) {
    ScalarVolume sal(grid), temp(grid);
    for (Index d = 0; d < grid->nDepth(); ++d) {
      const double z = grid->depth[d];
      const double taper = z < 200.0 ? 1.0 - (z / 200.0) * (z / 200.0) : 0.0;
      for (Index i = 0; i < grid->nLat(); ++i) {
        const double lat = grid->lat[i];
        const double band = std::exp(-((lat - 17.5) * (lat - 17.5)) / (2.0 * 0.5 * 0.5));
        for (Index j = 0; j < grid->nLon(); ++j) {
          const double fresh = t == 1 ? 1.5 * band * taper : 0.0;
          sal(d, i, j) = static_cast<float>(33.0 + 0.01 * z - fresh);
          temp(d, i, j) = static_cast<float>(29.0 - 0.05 * z + 0.2 * fresh);
        }
      }
    }
    vars["salinity"].push_back(std::move(sal));
    vars["temperature"].push_back(std::move(temp));
  }
  return Dataset::fromVolumes(stepAxis(2), grid, std::move(vars));
}

}  // namespace oceanscope::synthetic
