#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>

#include "oceanscope/dataset.hpp"
#include "oceanscope/grid.hpp"

namespace oceanscope::synthetic {

/// Square grid over [-halfWidth, halfWidth]² (lon = x, lat = y) for
/// Cartesian-metric tests, with `depths` levels 1, 2, ... meters.
SpatialGridPtr cartesianGrid(Index n, double halfWidth = 1.0, Index depths = 1);

/// Velocity field sampled from f(x, y, depth) -> (u, v) at every node.
template <typename Scalar, typename F>
VectorVolume<Scalar> velocityFromFunction(const SpatialGridPtr& grid, F&& f) {
  VectorVolume<Scalar> vel{Volume<Scalar>(grid), Volume<Scalar>(grid), std::nullopt};
  for (Index d = 0; d < grid->nDepth(); ++d) {
    for (Index i = 0; i < grid->nLat(); ++i) {
      for (Index j = 0; j < grid->nLon(); ++j) {
        const Eigen::Vector2d uv = f(grid->lon[j], grid->lat[i], grid->depth[d]);
        vel.u(d, i, j) = static_cast<Scalar>(uv[0]);
        vel.v(d, i, j) = static_cast<Scalar>(uv[1]);
      }
    }
  }
  return vel;
}

/// u = -ω(y - y0), v = ω(x - x0): vorticity 2ω, Okubo-Weiss -4ω².
template <typename Scalar = float>
VectorVolume<Scalar> solidBody(const SpatialGridPtr& grid, double omega = 1.0, double x0 = 0.0, double y0 = 0.0) {
  return velocityFromFunction<Scalar>(grid, [&](double x, double y, double) {
    return Eigen::Vector2d(-omega * (y - y0), omega * (x - x0));
  });
}

template <typename Scalar = float>
VectorVolume<Scalar> uniformFlow(const SpatialGridPtr& grid, double u0 = 1.0, double v0 = 0.0) {
  return velocityFromFunction<Scalar>(grid, [&](double, double, double) { return Eigen::Vector2d(u0, v0); });
}

/// u = a·y, v = 0.
template <typename Scalar = float>
VectorVolume<Scalar> shearFlow(const SpatialGridPtr& grid, double a = 1.0) {
  return velocityFromFunction<Scalar>(grid, [&](double, double y, double) { return Eigen::Vector2d(a * y, 0.0); });
}

/// u = a·x, v = -a·y: normal strain 2a, Okubo-Weiss 4a².
template <typename Scalar = float>
VectorVolume<Scalar> strainFlow(const SpatialGridPtr& grid, double a = 1.0) {
  return velocityFromFunction<Scalar>(grid, [&](double x, double y, double) { return Eigen::Vector2d(a * x, -a * y); });
}

/// Azimuthal speed Γ/(2πr)·(1 - exp(-r²/rc²)) around (x0, y0).
inline Eigen::Vector2d lambOseenVelocity(double x, double y, double gamma, double rc, double x0, double y0) {
  const double dx = x - x0, dy = y - y0, r2 = dx * dx + dy * dy;
  if (r2 == 0.0) return {0.0, 0.0};
  const double factor = gamma / (2.0 * 3.14159265358979323846 * r2) * (1.0 - std::exp(-r2 / (rc * rc)));
  return {-factor * dy, factor * dx};
}

template <typename Scalar = float>
VectorVolume<Scalar> lambOseen(const SpatialGridPtr& grid, double gamma, double rc, double x0 = 0.0, double y0 = 0.0) {
  return velocityFromFunction<Scalar>(grid, [&](double x, double y, double) {
    return lambOseenVelocity(x, y, gamma, rc, x0, y0);
  });
}

/// Rankine vortex: rigid rotation ω inside R, irrotational ωR²/r outside.
/// Outside R a radial outflow of `outflow` times the azimuthal speed is
/// added, so streamlines close exactly inside R and spiral away outside.
template <typename Scalar = float>
VectorVolume<Scalar> rankineWithOutflow(const SpatialGridPtr& grid, double radius, double omega = 1.0,
                                        double outflow = 0.5, double x0 = 0.0, double y0 = 0.0) {
  return velocityFromFunction<Scalar>(grid, [&](double x, double y, double) {
    const double dx = x - x0, dy = y - y0, r = std::hypot(dx, dy);
    if (r <= radius) return Eigen::Vector2d(-omega * dy, omega * dx);
    const double ut = omega * radius * radius / r;
    const Eigen::Vector2d tangent(-dy / r, dx / r), normal(dx / r, dy / r);
    return Eigen::Vector2d(ut * tangent + outflow * ut * normal);
  });
}

/// Parameters of the translating-blob benchmark and test fixture.
struct FixtureSpec {
  Index depths = 32;
  Index lats = 32;
  Index lons = 32;
  Index steps = 6;
  double lon0 = 80.0, lat0 = 8.0;  // south-west corner
  double spacing = 1.0 / 3.0;      // degrees
  double depthStep = 5.0;          // meters
  bool landCorner = true;          // NaN block in the north-west corner
  bool temperature = true;
  bool velocity = true;
};

/// Salinity blobs translating north-east by about one voxel per step,
/// temperature decreasing with depth, and a Lamb-Oseen eddy in (u, v).
/// Variables: salinity, temperature, u, v.
Dataset translatingBlobFixture(const FixtureSpec& spec = {});

/// Standard 32 depth × 32 lat × 32 lon × 6 step fixture.
inline Dataset standardFixture() { return translatingBlobFixture(FixtureSpec{}); }

/// Fixture for the depth-profile needle: a fresh filament crosses
/// 17.5°N, 88.5°E between step 0 and 1 and only affects the top 200 m.
Dataset filamentFixture();

/// Binary volume with a box of ones [d0,d1)×[i0,i1)×[j0,j1).
BinaryVolume boxMask(const SpatialGridPtr& grid, Index d0, Index d1, Index i0, Index i1, Index j0, Index j1);

/// Field taking `inside` on the box and `outside` elsewhere.
ScalarVolume boxField(const SpatialGridPtr& grid, Index d0, Index d1, Index i0, Index i1, Index j0, Index j1,
                      float inside, float outside);

/// Index grid with coordinates 0, 1, 2, ... on every axis.
SpatialGridPtr indexGrid(Index depths, Index lats, Index lons);

/// Time axis 0, 1, ..., steps-1 (days).
GridAxis stepAxis(Index steps);

}  // namespace oceanscope::synthetic
