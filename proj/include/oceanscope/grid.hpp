#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oceanscope/error.hpp"

namespace oceanscope {

using Index = std::ptrdiff_t;

enum class AxisName { time, depth, lat, lon };

std::string_view toString(AxisName name);

/// Ordered coordinates along one grid dimension. Degrees for lat/lon,
/// meters positive-down for depth, days (or step index) for time.
class GridAxis {
 public:
  GridAxis(AxisName name, std::vector<double> coords);

  AxisName name() const { return name_; }
  const std::vector<double>& coords() const { return coords_; }
  Index size() const { return static_cast<Index>(coords_.size()); }
  double operator[](Index i) const { return coords_[static_cast<std::size_t>(i)]; }
  double front() const { return coords_.front(); }
  double back() const { return coords_.back(); }

  bool contains(double x, double tol = 1e-9) const { return x >= front() - tol && x <= back() + tol; }

  /// Equal spacing within `tol` (single-point axes are uniform).
  bool isUniform(double tol = 1e-9) const;

  bool operator==(const GridAxis&) const = default;

 private:
  AxisName name_;
  std::vector<double> coords_;
};

/// Fractional position on an axis: x lies between coords[lo] and coords[lo+1],
/// `frac` in [0,1). Exact nodes (within tolerance) report frac == 0.
struct AxisPosition {
  Index lo = 0;
  double frac = 0.0;
};

std::optional<AxisPosition> locate(const GridAxis& axis, double x, double tol = 1e-9);

/// Nearest node index; x is clamped to the axis range.
Index nearestIndex(const GridAxis& axis, double x);

/// Fractional index to coordinate (linear between nodes).
double coordinateAt(const GridAxis& axis, double fractionalIndex);

/// Horizontal/vertical geometry shared by every volume of one time step.
struct SpatialGrid {
  GridAxis depth;
  GridAxis lat;
  GridAxis lon;

  Index nDepth() const { return depth.size(); }
  Index nLat() const { return lat.size(); }
  Index nLon() const { return lon.size(); }
  Index voxelCount() const { return nDepth() * nLat() * nLon(); }

  bool operator==(const SpatialGrid&) const = default;
};

using SpatialGridPtr = std::shared_ptr<const SpatialGrid>;

SpatialGridPtr makeSpatialGrid(std::vector<double> depth, std::vector<double> lat, std::vector<double> lon);

/// Evenly spaced coordinates first, first+step, ... (count values).
std::vector<double> linspaceStep(double first, double step, Index count);

struct Grid4D {
  GridAxis time;
  SpatialGridPtr space;

  Index nTime() const { return time.size(); }
  std::array<Index, 4> shape() const {
    return {time.size(), space->nDepth(), space->nLat(), space->nLon()};
  }
};

/// Half-open range of time step indices [begin, end).
struct TimeRange {
  Index begin = 0;
  Index end = 0;

  Index size() const { return end > begin ? end - begin : 0; }
  bool empty() const { return size() == 0; }
  static TimeRange inclusive(Index first, Index last) { return {first, last + 1}; }
};

/// Derivative metric. Spherical uses local scaling dx = R·dlon·cos(lat),
/// dy = R·dlat (radians); Cartesian treats lon/lat as plain x/y.
enum class Metric { spherical, cartesian };

inline constexpr double kEarthRadius = 6371000.0;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;

/// A D×NLat×NLon field on a SpatialGrid, row-major (depth, lat, lon).
/// For floating scalars NaN marks land.
template <typename Scalar>
class Volume {
 public:
  using Storage = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using SliceArray = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Slice = Eigen::Map<SliceArray>;
  using ConstSlice = Eigen::Map<const SliceArray>;

  Volume() = default;

  explicit Volume(SpatialGridPtr grid, Scalar fill = Scalar(0))
      : grid_(std::move(grid)), values_(Storage::Constant(grid_->voxelCount(), fill)) {}

  Volume(SpatialGridPtr grid, Storage values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->voxelCount()) {
      fail(ErrorCode::invalidInput, "volume payload size does not match grid shape");
    }
  }

  const SpatialGrid& grid() const { return *grid_; }
  const SpatialGridPtr& gridPtr() const { return grid_; }
  bool empty() const { return !grid_; }

  Index depths() const { return grid_->nDepth(); }
  Index rows() const { return grid_->nLat(); }
  Index cols() const { return grid_->nLon(); }
  Index size() const { return values_.size(); }

  Index index(Index d, Index i, Index j) const { return (d * rows() + i) * cols() + j; }

  Scalar& operator()(Index d, Index i, Index j) { return values_[index(d, i, j)]; }
  Scalar operator()(Index d, Index i, Index j) const { return values_[index(d, i, j)]; }

  Slice slice(Index d) { return Slice(values_.data() + d * rows() * cols(), rows(), cols()); }
  ConstSlice slice(Index d) const { return ConstSlice(values_.data() + d * rows() * cols(), rows(), cols()); }

  Storage& values() { return values_; }
  const Storage& values() const { return values_; }
  std::span<const Scalar> data() const { return {values_.data(), static_cast<std::size_t>(values_.size())}; }

  template <typename Other>
  Volume<Other> cast() const {
    return Volume<Other>(grid_, values_.template cast<Other>().eval());
  }

 private:
  SpatialGridPtr grid_;
  Storage values_;
};

using ScalarVolume = Volume<float>;
using BinaryVolume = Volume<std::uint8_t>;
using LabeledVolume = Volume<std::int32_t>;

/// Horizontal velocity (u eastward, v northward, m/s) with optional vertical w.
template <typename Scalar>
struct VectorVolume {
  Volume<Scalar> u;
  Volume<Scalar> v;
  std::optional<Volume<Scalar>> w;

  const SpatialGrid& grid() const { return u.grid(); }

  /// Shared grid and identical NaN masks across components.
  void validate() const {
    if (u.empty() || v.empty()) fail(ErrorCode::invalidInput, "velocity requires both u and v components");
    auto check = [&](const Volume<Scalar>& c, const char* name) {
      if (!(c.grid() == u.grid())) fail(ErrorCode::invalidInput, std::string("velocity component ") + name + " grid mismatch");
      for (Index k = 0; k < u.size(); ++k) {
        if (std::isnan(static_cast<double>(u.values()[k])) != std::isnan(static_cast<double>(c.values()[k]))) {
          fail(ErrorCode::invalidInput, std::string("velocity component ") + name + " land mask differs from u");
        }
      }
    };
    check(v, "v");
    if (w) check(*w, "w");
  }
};

template <typename Scalar>
bool isLand(Scalar value) {
  if constexpr (std::numeric_limits<Scalar>::has_quiet_NaN) {
    return std::isnan(value);
  } else {
    return false;
  }
}

/// Ocean mask (1 = finite value) of a floating volume.
template <typename Scalar>
BinaryVolume oceanMask(const Volume<Scalar>& field) {
  BinaryVolume mask(field.gridPtr());
  mask.values() = (!field.values().isNaN()).template cast<std::uint8_t>();
  return mask;
}

}  // namespace oceanscope
