#pragma once

#include <array>
#include <cmath>
#include <limits>

#include "oceanscope/grid.hpp"

namespace oceanscope {

/// Multilinear sample over the (depth, lat, lon) corners that carry non-zero
/// weight. Any such corner on land makes the sample NaN.
template <typename Scalar>
double sampleTrilinear(const Volume<Scalar>& f, const AxisPosition& pz, const AxisPosition& py,
                       const AxisPosition& px) {
  const int nz = pz.frac > 0.0 ? 2 : 1;
  const int ny = py.frac > 0.0 ? 2 : 1;
  const int nx = px.frac > 0.0 ? 2 : 1;
  if (nz * ny * nx == 1) return static_cast<double>(f(pz.lo, py.lo, px.lo));
  double acc = 0.0;
  bool first = true;
  for (int a = 0; a < nz; ++a) {
    const double wz = a == 0 ? 1.0 - pz.frac : pz.frac;
    for (int b = 0; b < ny; ++b) {
      const double wy = b == 0 ? 1.0 - py.frac : py.frac;
      for (int c = 0; c < nx; ++c) {
        const double wx = c == 0 ? 1.0 - px.frac : px.frac;
        const double value = static_cast<double>(f(pz.lo + a, py.lo + b, px.lo + c));
        if (std::isnan(value)) return std::numeric_limits<double>::quiet_NaN();
        const double term = wz * wy * wx * value;
        acc = first ? term : acc + term;  // keeps -0.0 at exact nodes
        first = false;
      }
    }
  }
  return acc;
}

template <typename Scalar>
double sampleBilinear(const Volume<Scalar>& f, Index depth, const AxisPosition& py, const AxisPosition& px) {
  return sampleTrilinear(f, AxisPosition{depth, 0.0}, py, px);
}

}  // namespace oceanscope
