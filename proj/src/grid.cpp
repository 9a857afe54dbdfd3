#include "oceanscope/grid.hpp"

#include <algorithm>

namespace oceanscope {

std::string_view toString(AxisName name) {
  switch (name) {
    case AxisName::time: return "time";
    case AxisName::depth: return "depth";
    case AxisName::lat: return "lat";
    case AxisName::lon: return "lon";
  }
  return "unknown";
}

GridAxis::GridAxis(AxisName name, std::vector<double> coords) : name_(name), coords_(std::move(coords)) {
  if (coords_.empty()) {
    fail(ErrorCode::invalidInput, std::string(toString(name_)) + " axis must have at least one coordinate");
  }
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (!std::isfinite(coords_[k])) {
      fail(ErrorCode::format, std::string(toString(name_)) + " axis has a non-finite coordinate");
    }
    if (k > 0 && !(coords_[k] > coords_[k - 1])) {
      fail(ErrorCode::format, std::string(toString(name_)) + " axis is not strictly increasing");
    }
  }
}

bool GridAxis::isUniform(double tol) const {
  if (coords_.size() < 3) return true;
  const double step = coords_[1] - coords_[0];
  for (std::size_t k = 2; k < coords_.size(); ++k) {
    if (std::abs((coords_[k] - coords_[k - 1]) - step) > tol) return false;
  }
  return true;
}

std::optional<AxisPosition> locate(const GridAxis& axis, double x, double tol) {
  const auto& c = axis.coords();
  if (!axis.contains(x, tol)) return std::nullopt;
  if (c.size() == 1) return AxisPosition{0, 0.0};
  // first node strictly greater than x
  auto it = std::upper_bound(c.begin(), c.end(), x);
  Index hi = static_cast<Index>(it - c.begin());
  hi = std::clamp<Index>(hi, 1, axis.size() - 1);
  const Index lo = hi - 1;
  double frac = (x - c[lo]) / (c[hi] - c[lo]);
  if (std::abs(x - c[lo]) <= tol) return AxisPosition{lo, 0.0};
  if (std::abs(x - c[hi]) <= tol) return AxisPosition{hi, 0.0};
  return AxisPosition{lo, std::clamp(frac, 0.0, 1.0)};
}

Index nearestIndex(const GridAxis& axis, double x) {
  const auto& c = axis.coords();
  auto it = std::lower_bound(c.begin(), c.end(), x);
  if (it == c.begin()) return 0;
  if (it == c.end()) return axis.size() - 1;
  const Index hi = static_cast<Index>(it - c.begin());
  return (x - c[hi - 1] <= c[hi] - x) ? hi - 1 : hi;
}

double coordinateAt(const GridAxis& axis, double fractionalIndex) {
  const Index n = axis.size();
  if (n == 1) return axis[0];
  const double clamped = std::clamp(fractionalIndex, 0.0, static_cast<double>(n - 1));
  const Index lo = std::min<Index>(static_cast<Index>(std::floor(clamped)), n - 2);
  const double t = clamped - static_cast<double>(lo);
  if (t == 0.0) return axis[lo];
  return axis[lo] + t * (axis[lo + 1] - axis[lo]);
}

SpatialGridPtr makeSpatialGrid(std::vector<double> depth, std::vector<double> lat, std::vector<double> lon) {
  return std::make_shared<const SpatialGrid>(SpatialGrid{GridAxis(AxisName::depth, std::move(depth)),
                                                         GridAxis(AxisName::lat, std::move(lat)),
                                                         GridAxis(AxisName::lon, std::move(lon))});
}

std::vector<double> linspaceStep(double first, double step, Index count) {
  std::vector<double> out(static_cast<std::size_t>(std::max<Index>(count, 0)));
  for (Index k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = first + static_cast<double>(k) * step;
  return out;
}

}  // namespace oceanscope
