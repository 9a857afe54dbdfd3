#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "oceanscope/grid.hpp"

namespace oceanscope {

struct DerivedFieldKind {
  enum class Kind { speed, vorticity, curlMagnitude, okuboWeiss, userScalar };

  Kind kind = Kind::speed;
  std::string name;  // userScalar only

  static DerivedFieldKind speed() { return {Kind::speed, {}}; }
  static DerivedFieldKind vorticity() { return {Kind::vorticity, {}}; }
  static DerivedFieldKind curlMagnitude() { return {Kind::curlMagnitude, {}}; }
  static DerivedFieldKind okuboWeiss() { return {Kind::okuboWeiss, {}}; }
  static DerivedFieldKind userScalar(std::string n) { return {Kind::userScalar, std::move(n)}; }

  /// Accepts speed, vorticity, curl, okubo-weiss, or user:<variable>.
  static DerivedFieldKind parse(std::string_view text);
  std::string label() const;

  bool operator==(const DerivedFieldKind&) const = default;
};

namespace detail {

/// First derivatives of a slice at (i, j): central in the interior,
/// one-sided at edges, zero along a degenerate (single-point) axis.
struct SliceDerivative {
  const SpatialGrid& grid;
  Metric metric;

  double dx(Index i, Index a, Index b) const {
    const double dlon = grid.lon[b] - grid.lon[a];
    if (metric == Metric::cartesian) return dlon;
    return kEarthRadius * std::cos(grid.lat[i] * kDegToRad) * dlon * kDegToRad;
  }
  double dy(Index a, Index b) const {
    const double dlat = grid.lat[b] - grid.lat[a];
    return metric == Metric::cartesian ? dlat : kEarthRadius * dlat * kDegToRad;
  }

  template <typename Scalar>
  double ddx(const Volume<Scalar>& f, Index d, Index i, Index j) const {
    const Index n = f.cols();
    if (n == 1) return 0.0;
    const Index a = j == 0 ? 0 : j - 1;
    const Index b = j == n - 1 ? n - 1 : j + 1;
    return (static_cast<double>(f(d, i, b)) - static_cast<double>(f(d, i, a))) / dx(i, a, b);
  }

  template <typename Scalar>
  double ddy(const Volume<Scalar>& f, Index d, Index i, Index j) const {
    const Index n = f.rows();
    if (n == 1) return 0.0;
    const Index a = i == 0 ? 0 : i - 1;
    const Index b = i == n - 1 ? n - 1 : i + 1;
    return (static_cast<double>(f(d, b, j)) - static_cast<double>(f(d, a, j))) / dy(a, b);
  }
};

}  // namespace detail

/// Velocity gradient terms at one voxel.
struct FlowGradient {
  double dudx, dudy, dvdx, dvdy;

  double vorticity() const { return dvdx - dudy; }
  double normalStrain() const { return dudx - dvdy; }
  double shearStrain() const { return dvdx + dudy; }
  double okuboWeiss() const {
    const double sn = normalStrain(), ss = shearStrain(), w = vorticity();
    return sn * sn + ss * ss - w * w;
  }
};

template <typename Scalar>
FlowGradient flowGradient(const VectorVolume<Scalar>& vel, Index d, Index i, Index j, Metric metric) {
  const detail::SliceDerivative D{vel.grid(), metric};
  return {D.ddx(vel.u, d, i, j), D.ddy(vel.u, d, i, j), D.ddx(vel.v, d, i, j), D.ddy(vel.v, d, i, j)};
}

/// Horizontal speed sqrt(u²+v²) evaluated in the volume's own precision.
template <typename Scalar>
Volume<Scalar> speedField(const VectorVolume<Scalar>& vel) {
  return Volume<Scalar>(vel.u.gridPtr(), (vel.u.values().square() + vel.v.values().square()).sqrt().eval());
}

/// Speed, vorticity, |curl| or Okubo-Weiss W = sn² + ss² − ω² of the
/// horizontal flow. Vertical velocity is never used.
template <typename Scalar>
Volume<Scalar> derivedField(const VectorVolume<Scalar>& vel, const DerivedFieldKind& kind,
                            Metric metric = Metric::spherical) {
  if (vel.u.empty() || vel.v.empty()) fail(ErrorCode::invalidInput, "derived field needs u and v");
  if (!(vel.u.grid() == vel.v.grid())) fail(ErrorCode::invalidInput, "u and v grids differ");
  using K = DerivedFieldKind::Kind;
  if (kind.kind == K::userScalar) {
    fail(ErrorCode::invalidInput, "user scalar '" + kind.name + "' is not derived from velocity");
  }
  if (kind.kind == K::speed) return speedField(vel);

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  Volume<Scalar> out(vel.u.gridPtr());
  for (Index d = 0; d < out.depths(); ++d) {
    for (Index i = 0; i < out.rows(); ++i) {
      for (Index j = 0; j < out.cols(); ++j) {
        double value = nan;
        if (!isLand(vel.u(d, i, j)) && !isLand(vel.v(d, i, j))) {
          const FlowGradient g = flowGradient(vel, d, i, j, metric);
          switch (kind.kind) {
            case K::vorticity: value = g.vorticity(); break;
            case K::curlMagnitude: value = std::abs(g.vorticity()); break;
            case K::okuboWeiss: value = g.okuboWeiss(); break;
            default: break;
          }
        }
        out(d, i, j) = static_cast<Scalar>(value);
      }
    }
  }
  return out;
}

}  // namespace oceanscope
