#include "fd_oracle.hpp"

#include <cmath>

namespace oracle {

using namespace oceanscope;

FdResult finiteDifference(const VectorVolume<double>& vel, Index d, Index i, Index j, Metric metric) {
  const SpatialGrid& g = vel.grid();
  const Index H = g.nLat(), W = g.nLon();
  const Index iw = std::max<Index>(j - 1, 0), ie = std::min<Index>(j + 1, W - 1);
  const Index is = std::max<Index>(i - 1, 0), in = std::min<Index>(i + 1, H - 1);
  double dx = g.lon[ie] - g.lon[iw];
  double dy = g.lat[in] - g.lat[is];
  if (metric == Metric::spherical) {
    const double rad = 3.14159265358979323846 / 180.0;
    dx *= 6371000.0 * std::cos(g.lat[i] * rad) * rad;
    dy *= 6371000.0 * rad;
  }
  const double dudx = (vel.u(d, i, ie) - vel.u(d, i, iw)) / dx;
  const double dvdx = (vel.v(d, i, ie) - vel.v(d, i, iw)) / dx;
  const double dudy = (vel.u(d, in, j) - vel.u(d, is, j)) / dy;
  const double dvdy = (vel.v(d, in, j) - vel.v(d, is, j)) / dy;
  const double w = dvdx - dudy;
  const double sn = dudx - dvdy, ss = dvdx + dudy;
  return {w, sn * sn + ss * ss - w * w};
}

}  // namespace oracle
