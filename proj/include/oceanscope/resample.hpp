#pragma once

#include <cmath>
#include <limits>

#include "oceanscope/grid.hpp"
#include "oceanscope/interpolate.hpp"

namespace oceanscope {

/// Target of regular resampling: depths {step, 2·step, …, maxDepth} and a
/// horizontal spacing of 1/(12·horizontalFactor) degrees.
struct ResampleSpec {
  double depthStep = 1.0;
  double maxDepth = 200.0;
  int horizontalFactor = 1;

  double horizontalSpacing() const { return 1.0 / (12.0 * horizontalFactor); }
  Index depthLevels() const { return static_cast<Index>(std::llround(maxDepth / depthStep)); }

  void validate() const {
    if (!(depthStep > 0.0)) fail(ErrorCode::invalidParameter, "depthStep must be positive");
    if (!(maxDepth > 0.0)) fail(ErrorCode::invalidParameter, "maxDepth must be positive");
    if (horizontalFactor < 1) fail(ErrorCode::invalidParameter, "horizontal factor r must be a positive integer");
    const double ratio = maxDepth / depthStep;
    if (std::abs(ratio - std::round(ratio)) > 1e-9) {
      fail(ErrorCode::invalidParameter, "maxDepth must be a multiple of depthStep");
    }
  }
};

/// Target grid of `spec` over the horizontal extent of `source`.
inline SpatialGridPtr regularTargetGrid(const SpatialGrid& source, const ResampleSpec& spec) {
  spec.validate();
  const double h = spec.horizontalSpacing();
  auto axisCount = [h](const GridAxis& a) {
    return static_cast<Index>(std::floor((a.back() - a.front()) / h + 1e-9)) + 1;
  };
  std::vector<double> depth(static_cast<std::size_t>(spec.depthLevels()));
  for (std::size_t k = 0; k < depth.size(); ++k) depth[k] = spec.depthStep * static_cast<double>(k + 1);
  return makeSpatialGrid(std::move(depth), linspaceStep(source.lat.front(), h, axisCount(source.lat)),
                         linspaceStep(source.lon.front(), h, axisCount(source.lon)));
}

/// Trilinear resampling onto a regular grid. Any stencil corner on land gives NaN.
template <typename Scalar>
Volume<Scalar> resampleOnto(const Volume<Scalar>& field, SpatialGridPtr target) {
  const SpatialGrid& src = field.grid();
  auto positions = [](const GridAxis& from, const GridAxis& to) {
    std::vector<AxisPosition> out;
    out.reserve(static_cast<std::size_t>(to.size()));
    for (double x : to.coords()) {
      auto p = locate(from, x);
      if (!p) {
        fail(ErrorCode::outOfDomain, std::string(toString(to.name())) + " coordinate " + std::to_string(x) +
                                         " outside source range [" + std::to_string(from.front()) + ", " +
                                         std::to_string(from.back()) + "]");
      }
      out.push_back(*p);
    }
    return out;
  };
  const auto pz = positions(src.depth, target->depth);
  const auto py = positions(src.lat, target->lat);
  const auto px = positions(src.lon, target->lon);

  Volume<Scalar> out(target);
  for (Index d = 0; d < out.depths(); ++d) {
    for (Index i = 0; i < out.rows(); ++i) {
      for (Index j = 0; j < out.cols(); ++j) {
        out(d, i, j) = static_cast<Scalar>(sampleTrilinear(field, pz[d], py[i], px[j]));
      }
    }
  }
  return out;
}

template <typename Scalar>
Volume<Scalar> resampleRegular(const Volume<Scalar>& field, const ResampleSpec& spec) {
  return resampleOnto(field, regularTargetGrid(field.grid(), spec));
}

}  // namespace oceanscope
