#include "oceanscope/flow.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "geojson.hpp"
#include "oceanscope/interpolate.hpp"
#include "oceanscope/worker_pool.hpp"

namespace oceanscope {

namespace {

constexpr double kSecondsPerDay = 86400.0;
constexpr double kRadToDeg = 180.0 / kPi;

/// Extent of node k's cell: halfway to each neighbor, clipped at the ends.
std::pair<double, double> cellExtent(const GridAxis& axis, Index k) {
  const double lo = k == 0 ? axis[0] : 0.5 * (axis[k - 1] + axis[k]);
  const double hi = k == axis.size() - 1 ? axis[k] : 0.5 * (axis[k] + axis[k + 1]);
  return {lo, hi};
}

double jitter(std::mt19937_64& rng, const GridAxis& axis, Index k) {
  const auto [lo, hi] = cellExtent(axis, k);
  if (!(hi > lo)) return axis[k];
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool interpolatesFinite(const ScalarVolume& field, const GeoPoint& p) {
  const SpatialGrid& g = field.grid();
  const auto px = locate(g.lon, p[0]), py = locate(g.lat, p[1]), pz = locate(g.depth, p[2]);
  return px && py && pz && std::isfinite(sampleTrilinear(field, *pz, *py, *px));
}

/// Uniform point in the voxel's cell. Draws whose interpolation stencil
/// reaches land are redrawn; after a few misses the node itself is used.
GeoPoint jitteredPoint(std::mt19937_64& rng, const ScalarVolume& field, Index voxel) {
  const SpatialGrid& g = field.grid();
  const Index j = voxel % g.nLon();
  const Index i = (voxel / g.nLon()) % g.nLat();
  const Index d = voxel / (g.nLon() * g.nLat());
  for (int attempt = 0; attempt < 16; ++attempt) {
    const double lon = jitter(rng, g.lon, j);
    const double lat = jitter(rng, g.lat, i);
    const double depth = jitter(rng, g.depth, d);
    const GeoPoint p(lon, lat, depth);
    if (interpolatesFinite(field, p)) return p;
  }
  return {g.lon[j], g.lat[i], g.depth[d]};
}

bool candidate(const ScalarVolume& field, const SeedSpec& spec, Index voxel) {
  if (std::isnan(field.values()[voxel])) return false;
  if (!spec.region) return true;
  const SpatialGrid& g = field.grid();
  const Index j = voxel % g.nLon();
  const Index i = (voxel / g.nLon()) % g.nLat();
  const Index d = voxel / (g.nLon() * g.nLat());
  return spec.region->containsVoxel(g, d, i, j);
}

}  // namespace

bool SeedRegion::containsVoxel(const SpatialGrid& grid, Index d, Index i, Index j) const {
  return grid.lon[j] >= lonMin && grid.lon[j] <= lonMax && grid.lat[i] >= latMin && grid.lat[i] <= latMax &&
         grid.depth[d] >= depthMin && grid.depth[d] <= depthMax;
}

void SeedSpec::validate(const SpatialGrid& grid) const {
  if (count < 1) fail(ErrorCode::invalidParameter, "seed count must be >= 1");
  if (!region) return;
  const SeedRegion& r = *region;
  if (!(r.lonMin <= r.lonMax && r.latMin <= r.latMax && r.depthMin <= r.depthMax)) {
    fail(ErrorCode::invalidParameter, "seed region bounds are inverted");
  }
  if (r.lonMax < grid.lon.front() || r.lonMin > grid.lon.back() || r.latMax < grid.lat.front() ||
      r.latMin > grid.lat.back() || r.depthMax < grid.depth.front() || r.depthMin > grid.depth.back()) {
    fail(ErrorCode::outOfDomain, "seed region lies outside the grid");
  }
}

std::vector<GeoPoint> placeSeeds(const ScalarVolume& field, const SeedSpec& spec) {
  spec.validate(field.grid());
  std::mt19937_64 rng(spec.rngSeed);
  const Index n = field.size();
  std::vector<GeoPoint> seeds;
  seeds.reserve(static_cast<std::size_t>(spec.count));

  if (spec.strategy == SeedSpec::Strategy::uniform) {
    Index candidates = 0;
    for (Index k = 0; k < n; ++k) candidates += candidate(field, spec, k) ? 1 : 0;
    if (candidates == 0) fail(ErrorCode::degenerateWeights, "no ocean voxel available for seeding");
    std::uniform_int_distribution<Index> pick(0, n - 1);
    while (static_cast<Index>(seeds.size()) < spec.count) {
      const Index voxel = pick(rng);
      if (candidate(field, spec, voxel)) seeds.push_back(jitteredPoint(rng, field, voxel));
    }
    return seeds;
  }

  std::vector<double> weights(static_cast<std::size_t>(n), 0.0);
  double total = 0.0;
  for (Index k = 0; k < n; ++k) {
    if (!candidate(field, spec, k)) continue;
    const double w = std::max(static_cast<double>(field.values()[k]), 0.0);
    weights[static_cast<std::size_t>(k)] = w;
    total += w;
  }
  if (!(total > 0.0) || !std::isfinite(total)) fail(ErrorCode::degenerateWeights, "seed weight field has no positive mass");
  std::discrete_distribution<Index> pick(weights.begin(), weights.end());
  for (Index s = 0; s < spec.count; ++s) seeds.push_back(jitteredPoint(rng, field, pick(rng)));
  return seeds;
}

std::vector<GeoPoint> placeSeeds(const VectorVolume<float>& vel, const SeedSpec& spec, Metric metric) {
  vel.validate();
  if (spec.strategy == SeedSpec::Strategy::uniform) return placeSeeds(vel.u, spec);
  return placeSeeds(derivedField(vel, spec.weight, metric), spec);
}

Direction parseDirection(std::string_view text) {
  if (text == "forward") return Direction::forward;
  if (text == "backward") return Direction::backward;
  if (text == "both") return Direction::both;
  fail(ErrorCode::invalidParameter, "unknown direction '" + std::string(text) + "'");
}

void IntegrationParams::validate() const {
  if (!(stepSize > 0.0) || !std::isfinite(stepSize)) fail(ErrorCode::invalidParameter, "stepSize must be > 0");
  if (maxSteps < 1) fail(ErrorCode::invalidParameter, "maxSteps must be >= 1");
  if (!(terminationSpeed >= 0.0)) fail(ErrorCode::invalidParameter, "terminationSpeed must be >= 0");
  if (!(timeStep > 0.0) || !std::isfinite(timeStep)) fail(ErrorCode::invalidParameter, "timeStep must be > 0");
}

double Polyline::length(Metric metric) const {
  double total = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    const GeoPoint delta = points[k] - points[k - 1];
    if (metric == Metric::cartesian) {
      total += delta.norm();
    } else {
      const double midLat = 0.5 * (points[k][1] + points[k - 1][1]) * kDegToRad;
      const double dx = kEarthRadius * std::cos(midLat) * delta[0] * kDegToRad;
      const double dy = kEarthRadius * delta[1] * kDegToRad;
      total += std::sqrt(dx * dx + dy * dy + delta[2] * delta[2]);
    }
  }
  return total;
}

double Polyline::meanSpeed() const {
  if (speeds.empty()) return 0.0;
  double sum = 0.0;
  for (double s : speeds) sum += s;
  return sum / static_cast<double>(speeds.size());
}

namespace {

/// Horizontal velocity on one depth level; false outside the domain or on land.
struct SliceSampler {
  const VectorVolume<float>& vel;
  Index depth;

  bool sample(double lon, double lat, double& u, double& v) const {
    const auto px = locate(vel.grid().lon, lon);
    const auto py = locate(vel.grid().lat, lat);
    if (!px || !py) return false;
    u = sampleBilinear(vel.u, depth, *py, *px);
    v = sampleBilinear(vel.v, depth, *py, *px);
    return !std::isnan(u) && !std::isnan(v);
  }
};

/// Unit-speed tangent in (lon, lat) per unit arc length.
struct TangentField {
  SliceSampler sampler;
  Metric metric;
  double sign;
  double minSpeed;

  bool operator()(const Eigen::Vector2d& p, Eigen::Vector2d& out, double* speedOut = nullptr) const {
    double u = 0.0, v = 0.0;
    if (!sampler.sample(p[0], p[1], u, v)) return false;
    const double speed = std::hypot(u, v);
    if (speedOut) *speedOut = speed;
    if (!(speed > minSpeed)) return false;
    out = Eigen::Vector2d(u, v) * (sign / speed);
    if (metric == Metric::spherical) out[0] /= std::cos(p[1] * kDegToRad);
    return true;
  }
};

/// Integrates in one direction; the seed itself is not included.
void integrateStreamline(const TangentField& f, Eigen::Vector2d p, double h, Index maxSteps, double depth,
                         std::vector<GeoPoint>& points, std::vector<double>& speeds) {
  Eigen::Vector2d k1, k2, k3, k4;
  for (Index step = 0; step < maxSteps; ++step) {
    if (!f(p, k1) || !f(p + 0.5 * h * k1, k2) || !f(p + 0.5 * h * k2, k3) || !f(p + h * k3, k4)) return;
    const Eigen::Vector2d next = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    double u = 0.0, v = 0.0;
    if (!f.sampler.sample(next[0], next[1], u, v)) return;
    p = next;
    points.emplace_back(p[0], p[1], depth);
    speeds.push_back(std::hypot(u, v));
    if (!(speeds.back() > f.minSpeed)) return;
  }
}

}  // namespace

Polyline streamline(const VectorVolume<float>& vel, const GeoPoint& seed, const IntegrationParams& params) {
  params.validate();
  const SpatialGrid& g = vel.grid();
  if (!g.lon.contains(seed[0]) || !g.lat.contains(seed[1]) || !g.depth.contains(seed[2])) {
    fail(ErrorCode::invalidSeed, "seed lies outside the domain");
  }
  const Index depth = nearestIndex(g.depth, seed[2]);
  const double depthCoord = g.depth[depth];
  const SliceSampler sampler{vel, depth};
  double u = 0.0, v = 0.0;
  if (!sampler.sample(seed[0], seed[1], u, v)) fail(ErrorCode::invalidSeed, "seed lies on land");

  const double minSpeed = std::max(params.terminationSpeed, 0.0);
  const Eigen::Vector2d start(seed[0], seed[1]);
  Polyline line;
  std::vector<GeoPoint> back;
  std::vector<double> backSpeeds;
  if (params.direction != Direction::forward) {
    integrateStreamline({sampler, params.metric, -1.0, minSpeed}, start, params.stepSize, params.maxSteps, depthCoord,
                        back, backSpeeds);
  }
  line.points.assign(back.rbegin(), back.rend());
  line.speeds.assign(backSpeeds.rbegin(), backSpeeds.rend());
  line.points.emplace_back(seed[0], seed[1], depthCoord);
  line.speeds.push_back(std::hypot(u, v));
  if (params.direction != Direction::backward) {
    integrateStreamline({sampler, params.metric, 1.0, minSpeed}, start, params.stepSize, params.maxSteps, depthCoord,
                        line.points, line.speeds);
  }
  return line;
}

std::vector<Polyline> streamlines(const VectorVolume<float>& vel, const std::vector<GeoPoint>& seeds,
                                  const IntegrationParams& params, WorkerPool* pool) {
  std::vector<Polyline> lines(seeds.size());
  auto body = [&](std::size_t s) {
    lines[s] = streamline(vel, seeds[s], params);
    lines[s].seedIndex = static_cast<Index>(s);
  };
  if (pool) {
    pool->parallelFor(seeds.size(), body);
  } else {
    for (std::size_t s = 0; s < seeds.size(); ++s) body(s);
  }
  return lines;
}

VelocitySeries preloadVelocity(const Dataset& dataset, TimeRange range, const VelocityNames& names, WorkerPool* pool) {
  if (range.begin < 0 || range.end > dataset.timeSteps()) fail(ErrorCode::bounds, "time range exceeds dataset steps");
  if (range.size() < 2) fail(ErrorCode::invalidRange, "pathlines need at least 2 time steps");
  VelocitySeries series;
  series.steps.resize(static_cast<std::size_t>(range.size()));
  auto body = [&](std::size_t s) { series.steps[s] = dataset.loadVelocity(range.begin + static_cast<Index>(s), names); };
  if (pool) {
    pool->parallelFor(series.steps.size(), body);
  } else {
    for (std::size_t s = 0; s < series.steps.size(); ++s) body(s);
  }
  for (Index t = range.begin; t < range.end; ++t) series.times.push_back(dataset.grid().time[t]);
  return series;
}

namespace {

struct SeriesSampler {
  const VelocitySeries& series;
  Metric metric;

  /// Velocity (u, v, w) at position p = (lon, lat, depth) and time t.
  bool velocity(const GeoPoint& p, double t, Eigen::Vector3d& out) const {
    const SpatialGrid& g = series.steps.front().grid();
    const auto px = locate(g.lon, p[0]);
    const auto py = locate(g.lat, p[1]);
    const auto pz = locate(g.depth, p[2]);
    if (!px || !py || !pz) return false;
    const auto& times = series.times;
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t lo = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    lo = std::min(lo, times.size() - 2);
    const double frac = std::clamp((t - times[lo]) / (times[lo + 1] - times[lo]), 0.0, 1.0);
    auto at = [&](std::size_t s, Eigen::Vector3d& v) {
      const auto& vel = series.steps[s];
      v[0] = sampleTrilinear(vel.u, *pz, *py, *px);
      v[1] = sampleTrilinear(vel.v, *pz, *py, *px);
      v[2] = vel.w ? sampleTrilinear(*vel.w, *pz, *py, *px) : 0.0;
      return !v.array().isNaN().any();
    };
    Eigen::Vector3d a, b;
    if (!at(lo, a)) return false;
    if (frac == 0.0) {
      out = a;
      return true;
    }
    if (!at(lo + 1, b)) return false;
    out = (1.0 - frac) * a + frac * b;
    return true;
  }

  /// Position rate (dlon, dlat, ddepth) per time-axis unit.
  bool rate(const GeoPoint& p, double t, GeoPoint& out, double* speed = nullptr) const {
    Eigen::Vector3d vel;
    if (!velocity(p, t, vel)) return false;
    if (speed) *speed = std::hypot(vel[0], vel[1]);
    if (metric == Metric::cartesian) {
      out = GeoPoint(vel[0], vel[1], -vel[2]);
    } else {
      const double scale = kSecondsPerDay / kEarthRadius * kRadToDeg;
      out = GeoPoint(vel[0] * scale / std::cos(p[1] * kDegToRad), vel[1] * scale, -vel[2] * kSecondsPerDay);
    }
    return true;
  }
};

Polyline integratePathline(const SeriesSampler& f, const GeoPoint& seed, const IntegrationParams& params) {
  const auto& times = f.series.times;
  const bool forward = params.direction == Direction::forward;
  const double t0 = forward ? times.front() : times.back();
  const double tEnd = forward ? times.back() : times.front();
  const double dtSigned = forward ? params.timeStep : -params.timeStep;

  Polyline line;
  GeoPoint p = seed;
  double speed = 0.0;
  GeoPoint k1, k2, k3, k4;
  if (!f.rate(p, t0, k1, &speed)) fail(ErrorCode::invalidSeed, "pathline seed lies on land or outside the domain");
  line.points.push_back(p);
  line.times.push_back(t0);
  line.speeds.push_back(speed);

  double t = t0;
  for (Index step = 0; step < params.maxSteps; ++step) {
    const double remaining = tEnd - t;
    if (std::abs(remaining) <= 1e-12 * std::max(1.0, std::abs(tEnd))) break;
    const double dt = std::abs(remaining) < std::abs(dtSigned) ? remaining : dtSigned;
    if (!f.rate(p, t, k1) || !f.rate(p + 0.5 * dt * k1, t + 0.5 * dt, k2) ||
        !f.rate(p + 0.5 * dt * k2, t + 0.5 * dt, k3) || !f.rate(p + dt * k3, t + dt, k4)) {
      break;
    }
    const GeoPoint next = p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double tNext = dt == remaining ? tEnd : t0 + static_cast<double>(step + 1) * dtSigned;
    GeoPoint unused;
    if (!f.rate(next, tNext, unused, &speed)) break;
    p = next;
    t = tNext;
    line.points.push_back(p);
    line.times.push_back(t);
    line.speeds.push_back(speed);
  }
  return line;
}

}  // namespace

std::vector<Polyline> pathlines(const VelocitySeries& series, const std::vector<GeoPoint>& seeds,
                                const IntegrationParams& params, WorkerPool* pool) {
  params.validate();
  if (series.steps.size() < 2 || series.times.size() != series.steps.size()) {
    fail(ErrorCode::invalidRange, "pathlines need at least 2 time steps");
  }
  if (params.direction == Direction::both) {
    fail(ErrorCode::invalidParameter, "pathlines integrate either forward or backward in time");
  }
  const SeriesSampler sampler{series, params.metric};
  std::vector<Polyline> lines(seeds.size());
  auto body = [&](std::size_t s) {
    lines[s] = integratePathline(sampler, seeds[s], params);
    lines[s].seedIndex = static_cast<Index>(s);
  };
  if (pool) {
    pool->parallelFor(seeds.size(), body);
  } else {
    for (std::size_t s = 0; s < seeds.size(); ++s) body(s);
  }
  return lines;
}

std::vector<Polyline> pathlines(const Dataset& dataset, const std::vector<GeoPoint>& seeds,
                                const IntegrationParams& params, TimeRange range, WorkerPool* pool,
                                const VelocityNames& names) {
  params.validate();
  if (range.size() < 2) fail(ErrorCode::invalidRange, "pathlines need at least 2 time steps");
  return pathlines(preloadVelocity(dataset, range, names, pool), seeds, params, pool);
}

std::string polylinesToGeoJson(const std::vector<Polyline>& lines, Metric metric) {
  std::vector<nlohmann::json> features;
  features.reserve(lines.size());
  for (const auto& line : lines) {
    std::vector<geojson::Position> coords;
    for (const auto& p : line.points) coords.push_back({p[0], p[1], p[2]});
    nlohmann::json props = {{"seedIndex", line.seedIndex},
                            {"length", geojson::number(line.length(metric))},
                            {"meanSpeed", geojson::number(line.meanSpeed())}};
    if (!line.times.empty()) props["times"] = line.times;
    features.push_back(geojson::lineString(coords, std::move(props)));
  }
  return geojson::featureCollection(std::move(features)).dump();
}

}  // namespace oceanscope
