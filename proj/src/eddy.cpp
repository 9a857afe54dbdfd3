#include "oceanscope/eddy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "geojson.hpp"
#include "oceanscope/labeling.hpp"
#include "oceanscope/worker_pool.hpp"

namespace oceanscope {

std::vector<PersistencePair> speedMinima(const Eigen::Ref<const ScalarVolume::SliceArray>& speed) {
  const Index H = speed.rows(), W = speed.cols();
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(H * W));
  for (Index k = 0; k < H * W; ++k)
    if (!std::isnan(speed(k / W, k % W))) order.push_back(k);
  auto value = [&](Index k) { return static_cast<double>(speed(k / W, k % W)); };
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double va = value(a), vb = value(b);
    return va < vb || (va == vb && a < b);
  });

  // Component bookkeeping: every processed voxel points into the union-find;
  // the root records the voxel that created its component (its minimum).
  constexpr Index unprocessed = -1;
  std::vector<Index> rank(static_cast<std::size_t>(H * W), unprocessed);
  UnionFind sets(static_cast<std::size_t>(H * W));
  std::vector<Index> birthOf(static_cast<std::size_t>(H * W), -1);  // root -> minimum voxel
  std::vector<std::uint8_t> isBirth(static_cast<std::size_t>(H * W), 0);
  std::vector<double> deathOf(static_cast<std::size_t>(H * W), std::numeric_limits<double>::infinity());

  for (std::size_t r = 0; r < order.size(); ++r) {
    const Index k = order[r];
    rank[static_cast<std::size_t>(k)] = static_cast<Index>(r);
    const Index i = k / W, j = k % W;
    std::array<std::size_t, 4> roots{};
    int count = 0;
    const std::array<std::pair<Index, Index>, 4> nbrs{{{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}}};
    for (const auto& [ni, nj] : nbrs) {
      if (ni < 0 || ni >= H || nj < 0 || nj >= W) continue;
      const Index nk = ni * W + nj;
      if (rank[static_cast<std::size_t>(nk)] == unprocessed) continue;
      const std::size_t root = sets.find(static_cast<std::size_t>(nk));
      if (std::find(roots.begin(), roots.begin() + count, root) == roots.begin() + count) roots[static_cast<std::size_t>(count++)] = root;
    }
    if (count == 0) {
      birthOf[static_cast<std::size_t>(k)] = k;
      isBirth[static_cast<std::size_t>(k)] = 1;
      continue;
    }
    // Elder rule: the component born first (lowest rank) survives.
    std::size_t elder = roots[0];
    for (int c = 1; c < count; ++c) {
      if (rank[static_cast<std::size_t>(birthOf[roots[static_cast<std::size_t>(c)]])] <
          rank[static_cast<std::size_t>(birthOf[elder])]) {
        elder = roots[static_cast<std::size_t>(c)];
      }
    }
    const Index elderBirth = birthOf[elder];
    for (int c = 0; c < count; ++c) {
      const std::size_t root = roots[static_cast<std::size_t>(c)];
      if (root != elder) deathOf[static_cast<std::size_t>(birthOf[root])] = value(k);
    }
    std::size_t merged = sets.unite(elder, static_cast<std::size_t>(k));
    for (int c = 0; c < count; ++c) merged = sets.unite(merged, roots[static_cast<std::size_t>(c)]);
    birthOf[merged] = elderBirth;
  }

  std::vector<PersistencePair> out;
  for (Index k : order) {
    if (!isBirth[static_cast<std::size_t>(k)]) continue;
    const Index i = k / W, j = k % W;
    if (i == 0 || j == 0 || i == H - 1 || j == W - 1) continue;
    const double v = value(k);
    if (std::isnan(speed(i - 1, j)) || std::isnan(speed(i + 1, j)) || std::isnan(speed(i, j - 1)) ||
        std::isnan(speed(i, j + 1))) {
      continue;
    }
    PersistencePair p;
    p.lat = i;
    p.lon = j;
    p.birthValue = v;
    p.deathValue = deathOf[static_cast<std::size_t>(k)];
    p.persistence = p.deathValue - p.birthValue;
    out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const PersistencePair& a, const PersistencePair& b) {
    return std::pair{a.lat, a.lon} < std::pair{b.lat, b.lon};
  });
  return out;
}

std::vector<PersistencePair> speedMinima(const VectorVolume<float>& vel, Index depth) {
  vel.validate();
  if (depth < 0 || depth >= vel.u.depths()) fail(ErrorCode::bounds, "depth level out of range");
  const ScalarVolume::SliceArray speed = (vel.u.slice(depth).square() + vel.v.slice(depth).square()).sqrt();
  return speedMinima(speed);
}

std::vector<PersistencePair> simplifyMinima(const std::vector<PersistencePair>& pairs, double threshold) {
  if (!(threshold >= 0.0)) fail(ErrorCode::invalidParameter, "persistence threshold must be >= 0");
  std::vector<PersistencePair> out;
  std::copy_if(pairs.begin(), pairs.end(), std::back_inserter(out),
               [&](const PersistencePair& p) { return p.persistence >= threshold; });
  return out;
}

void EddyParams::validate() const {
  if (!(stepFraction > 0.0)) fail(ErrorCode::invalidParameter, "stepFraction must be > 0");
  if (!(loopsBudget >= 1.0)) fail(ErrorCode::invalidParameter, "loopsBudget must be >= 1");
  if (!(closureFraction > 0.0)) fail(ErrorCode::invalidParameter, "closureFraction must be > 0");
  if (persistenceThreshold && !(*persistenceThreshold >= 0.0)) {
    fail(ErrorCode::invalidParameter, "persistence threshold must be >= 0");
  }
  if (rMax && !(*rMax >= 1.0)) fail(ErrorCode::invalidParameter, "rMax must be >= 1 voxel");
  if (!(radialTolerance > 0.0)) fail(ErrorCode::invalidParameter, "radial tolerance must be > 0");
  if (!(seedOffset > 0.0)) fail(ErrorCode::invalidParameter, "seedOffset must be > 0");
  if (n < 1) fail(ErrorCode::invalidParameter, "merge radius n must be >= 1");
}

namespace {

/// Position relative to the center in a locally isotropic frame.
Eigen::Vector2d localOffset(const GeoPoint& p, const GeoPoint& center, Metric metric) {
  const double scale = metric == Metric::spherical ? std::cos(center[1] * kDegToRad) : 1.0;
  return {(p[0] - center[0]) * scale, p[1] - center[1]};
}

GeoPoint voxelCenter(const SpatialGrid& g, Index d, Index i, Index j) { return {g.lon[j], g.lat[i], g.depth[d]}; }

/// Grid spacing around (i, j) in the arc units of the streamline integrator.
double localSpacing(const SpatialGrid& g, Index i, Index j, Metric metric) {
  auto spacing = [](const GridAxis& a, Index k) {
    if (a.size() == 1) return std::numeric_limits<double>::infinity();
    const Index lo = std::min(k, a.size() - 2);
    return a[lo + 1] - a[lo];
  };
  const double scale = metric == Metric::spherical ? std::cos(g.lat[i] * kDegToRad) : 1.0;
  return std::min(spacing(g.lat, i), spacing(g.lon, j) * scale);
}

IntegrationParams loopIntegration(const SpatialGrid& g, Index i, Index j, double radiusVoxels, const EddyParams& p) {
  IntegrationParams ip;
  ip.metric = p.metric;
  ip.stepSize = p.stepFraction * localSpacing(g, i, j, p.metric);
  ip.maxSteps = static_cast<Index>(std::ceil(p.loopsBudget * 2.0 * kPi * std::max(radiusVoxels, 1.0) / p.stepFraction)) + 8;
  ip.terminationSpeed = 0.0;
  return ip;
}

/// Cumulative signed angle at every polyline point.
std::vector<double> cumulativeWinding(const Polyline& line, const GeoPoint& center, Metric metric) {
  std::vector<double> theta(line.points.size(), 0.0);
  for (std::size_t k = 1; k < line.points.size(); ++k) {
    const Eigen::Vector2d a = localOffset(line.points[k - 1], center, metric);
    const Eigen::Vector2d b = localOffset(line.points[k], center, metric);
    const double cross = a[0] * b[1] - a[1] * b[0];
    theta[k] = theta[k - 1] + std::atan2(cross, a.dot(b));
  }
  return theta;
}

int quadrantOf(const Eigen::Vector2d& r) {
  if (r[1] >= 0.0) return r[0] >= 0.0 ? 0 : 1;
  return r[0] < 0.0 ? 2 : 3;
}

}  // namespace

double windingAngle(const Polyline& line, const GeoPoint& center, Metric metric) {
  const auto theta = cumulativeWinding(line, center, metric);
  return theta.empty() ? 0.0 : theta.back();
}

WindingResult windingTest(const VectorVolume<float>& vel, Index depth, Index lat, Index lon, const EddyParams& params) {
  params.validate();
  const SpatialGrid& g = vel.grid();
  WindingResult result;
  if (lat <= 0 || lat >= g.nLat() - 1 || lon <= 0 || lon >= g.nLon() - 1) {
    result.reason = "candidate is not interior to the slice";
    return result;
  }
  const GeoPoint center = voxelCenter(g, depth, lat, lon);
  const double at = std::min(static_cast<double>(lon) + params.seedOffset, static_cast<double>(g.nLon() - 1));
  const auto base = static_cast<Index>(std::floor(at));
  const Index next = std::min(base + 1, g.nLon() - 1);
  const double lonSeed = g.lon[base] + (at - static_cast<double>(base)) * (g.lon[next] - g.lon[base]);
  const GeoPoint seed(lonSeed, g.lat[lat], g.depth[depth]);
  try {
    result.streamline = streamline(vel, seed, loopIntegration(g, lat, lon, 1.0, params));
  } catch (const Error& e) {
    result.reason = e.what();
    return result;
  }
  std::array<bool, 4> seen{};
  for (const auto& p : result.streamline.points) seen[static_cast<std::size_t>(quadrantOf(localOffset(p, center, params.metric)))] = true;
  result.quadrantsVisited = static_cast<int>(std::count(seen.begin(), seen.end(), true));
  result.windingAngle = windingAngle(result.streamline, center, params.metric);
  result.pass = result.quadrantsVisited == 4;
  if (!result.pass) result.reason = "streamline visits " + std::to_string(result.quadrantsVisited) + " quadrants";
  return result;
}

bool closesLoop(const VectorVolume<float>& vel, Index depth, const GeoPoint& center, const GeoPoint& seed,
                double radiusVoxels, const EddyParams& params, Polyline* accepted) {
  const SpatialGrid& g = vel.grid();
  const Index i = nearestIndex(g.lat, center[1]), j = nearestIndex(g.lon, center[0]);
  GeoPoint start = seed;
  start[2] = g.depth[depth];
  Polyline line;
  try {
    line = streamline(vel, start, loopIntegration(g, i, j, radiusVoxels, params));
  } catch (const Error&) {
    return false;
  }
  const auto theta = cumulativeWinding(line, center, params.metric);
  constexpr double fullTurn = 2.0 * kPi;
  for (std::size_t k = 1; k < theta.size(); ++k) {
    if (std::abs(theta[k]) < fullTurn) continue;
    // Point where the sweep reaches exactly one turn, by linear interpolation.
    const double s = (fullTurn - std::abs(theta[k - 1])) / (std::abs(theta[k]) - std::abs(theta[k - 1]));
    const GeoPoint end = line.points[k - 1] + s * (line.points[k] - line.points[k - 1]);
    const double gap = (localOffset(end, center, params.metric) - localOffset(seed, center, params.metric)).norm();
    const double radius = localOffset(seed, center, params.metric).norm();
    if (gap > params.closureFraction * radius) return false;
    if (accepted) {
      line.points.resize(k + 1);
      line.speeds.resize(k + 1);
      *accepted = std::move(line);
    }
    return true;
  }
  return false;
}

namespace {

GeoPoint axisPoint(const SpatialGrid& g, Index d, Index i, Index j, double dirLat, double dirLon, double r) {
  return {coordinateAt(g.lon, static_cast<double>(j) + r * dirLon), coordinateAt(g.lat, static_cast<double>(i) + r * dirLat),
          g.depth[d]};
}

double physicalDistance(const GeoPoint& a, const GeoPoint& b, Metric metric) {
  if (metric == Metric::cartesian) return std::hypot(b[0] - a[0], b[1] - a[1]);
  const double dx = kEarthRadius * std::cos(a[1] * kDegToRad) * (b[0] - a[0]) * kDegToRad;
  const double dy = kEarthRadius * (b[1] - a[1]) * kDegToRad;
  return std::hypot(dx, dy);
}

constexpr std::array<std::pair<double, double>, kRadialAxes> kAxes{{
    {0.0, 1.0}, {1.0, 1.0}, {1.0, 0.0}, {1.0, -1.0}, {0.0, -1.0}, {-1.0, -1.0}, {-1.0, 0.0}, {-1.0, 1.0}}};

}  // namespace

RadialSearch radialSearch(const VectorVolume<float>& vel, Index depth, Index lat, Index lon, double dirLat,
                          double dirLon, double rMax, const EddyParams& params) {
  const SpatialGrid& g = vel.grid();
  const GeoPoint center = voxelCenter(g, depth, lat, lon);
  const double norm = std::hypot(dirLat, dirLon);
  dirLat /= norm;
  dirLon /= norm;
  RadialSearch out;
  Polyline line;
  auto passes = [&](double r, Polyline* keep) {
    return closesLoop(vel, depth, center, axisPoint(g, depth, lat, lon, dirLat, dirLon, r), r, params, keep);
  };
  double lo = std::min(params.seedOffset, rMax), hi = rMax;
  if (!passes(lo, &line)) return out;
  Polyline best = std::move(line);
  if (passes(hi, &line)) {
    lo = hi;
    best = std::move(line);
    out.domainLimited = true;
  } else {
    while (hi - lo > params.radialTolerance) {
      const double mid = 0.5 * (lo + hi);
      ++out.probes;
      if (passes(mid, &line)) {
        lo = mid;
        best = std::move(line);
      } else {
        hi = mid;
      }
    }
  }
  out.radiusVoxels = lo;
  out.radius = physicalDistance(center, axisPoint(g, depth, lat, lon, dirLat, dirLon, lo), params.metric);
  out.streamline = std::move(best);
  return out;
}

EddyDescriptor eddyBoundary(const VectorVolume<float>& vel, Index depth, Index lat, Index lon, const EddyParams& params) {
  params.validate();
  const SpatialGrid& g = vel.grid();
  const double edge = static_cast<double>(std::min({lat, g.nLat() - 1 - lat, lon, g.nLon() - 1 - lon})) - 1.0;
  const double rMax = params.rMax ? std::min(*params.rMax, edge) : edge;
  if (rMax < 1.0) fail(ErrorCode::degenerateEddy, "eddy center too close to the slice edge");

  EddyDescriptor eddy;
  eddy.center = voxelCenter(g, depth, lat, lon);
  eddy.depthIndex = depth;
  eddy.latIndex = lat;
  eddy.lonIndex = lon;
  eddy.depthExtent = {g.depth[depth], g.depth[depth]};
  eddy.coreSpeed = std::hypot(static_cast<double>(vel.u(depth, lat, lon)), static_cast<double>(vel.v(depth, lat, lon)));
  bool any = false;
  std::vector<Polyline> bundle;
  for (int a = 0; a < kRadialAxes; ++a) {
    RadialSearch s = radialSearch(vel, depth, lat, lon, kAxes[static_cast<std::size_t>(a)].first,
                                  kAxes[static_cast<std::size_t>(a)].second, rMax, params);
    eddy.boundaryRadii[static_cast<std::size_t>(a)] = s.radius;
    eddy.radiiVoxels[static_cast<std::size_t>(a)] = s.radiusVoxels;
    eddy.probes[static_cast<std::size_t>(a)] = s.probes;
    if (s.streamline) {
      any = true;
      bundle.push_back(std::move(*s.streamline));
    }
  }
  if (!any) fail(ErrorCode::degenerateEddy, "no radial axis produced a closed streamline");
  eddy.streamlines = std::move(bundle);
  return eddy;
}

namespace {

double sliceSpeedRange(const VectorVolume<float>& vel, Index d) {
  const ScalarVolume::SliceArray speed = (vel.u.slice(d).square() + vel.v.slice(d).square()).sqrt();
  float lo = std::numeric_limits<float>::infinity(), hi = -lo;
  for (Index k = 0; k < speed.size(); ++k) {
    const float s = speed.data()[k];
    if (std::isnan(s)) continue;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return hi >= lo ? static_cast<double>(hi) - static_cast<double>(lo) : 0.0;
}

std::vector<EddyDescriptor> detectInSlice(const VectorVolume<float>& vel, Index d, const EddyParams& params) {
  const auto minima = speedMinima(vel, d);
  const double threshold = params.persistenceThreshold.value_or(0.1 * sliceSpeedRange(vel, d));
  std::vector<EddyDescriptor> out;
  for (const auto& m : simplifyMinima(minima, threshold)) {
    const WindingResult w = windingTest(vel, d, m.lat, m.lon, params);
    if (!w.pass) continue;
    try {
      EddyDescriptor e = eddyBoundary(vel, d, m.lat, m.lon, params);
      e.persistence = m.persistence;
      e.windingAngle = w.windingAngle;
      e.streamlines.push_back(w.streamline);
      out.push_back(std::move(e));
    } catch (const Error& err) {
      if (err.code() != ErrorCode::degenerateEddy) throw;
    }
  }
  return out;
}

}  // namespace

std::vector<EddyDescriptor> detectEddies(const VectorVolume<float>& vel, const EddyParams& params, WorkerPool* pool) {
  params.validate();
  vel.validate();
  const Index D = vel.u.depths();
  std::vector<std::vector<EddyDescriptor>> perSlice(static_cast<std::size_t>(D));
  auto body = [&](std::size_t d) { perSlice[d] = detectInSlice(vel, static_cast<Index>(d), params); };
  if (pool) {
    pool->parallelFor(perSlice.size(), body);
  } else {
    for (std::size_t d = 0; d < perSlice.size(); ++d) body(d);
  }

  // Reduction in depth order: link detections within n voxels on adjacent levels.
  std::vector<EddyDescriptor> all;
  for (auto& slice : perSlice)
    for (auto& e : slice) all.push_back(std::move(e));
  UnionFind columns(all.size());
  const Index n2 = static_cast<Index>(params.n) * params.n;
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      if (all[b].depthIndex != all[a].depthIndex + 1) continue;
      const Index di = all[b].latIndex - all[a].latIndex, dj = all[b].lonIndex - all[a].lonIndex;
      if (di * di + dj * dj <= n2) columns.unite(a, b);
    }
  }
  std::vector<std::vector<std::size_t>> members(all.size());
  for (std::size_t a = 0; a < all.size(); ++a) members[columns.find(a)].push_back(a);

  std::vector<EddyDescriptor> out;
  for (const auto& group : members) {
    if (group.empty()) continue;
    std::size_t rep = group.front();
    for (std::size_t m : group)
      if (all[m].coreSpeed < all[rep].coreSpeed) rep = m;
    EddyDescriptor column = all[rep];
    column.streamlines.clear();
    double dmin = all[group.front()].depthExtent[0], dmax = dmin;
    for (std::size_t m : group) {
      dmin = std::min(dmin, all[m].depthExtent[0]);
      dmax = std::max(dmax, all[m].depthExtent[1]);
      for (const auto& line : all[m].streamlines) column.streamlines.push_back(line);
    }
    column.depthExtent = {dmin, dmax};
    column.depthLevels = static_cast<Index>(group.size());
    out.push_back(std::move(column));
  }
  std::sort(out.begin(), out.end(), [](const EddyDescriptor& a, const EddyDescriptor& b) {
    return std::tuple{a.depthExtent[0], a.latIndex, a.lonIndex, a.depthIndex} <
           std::tuple{b.depthExtent[0], b.latIndex, b.lonIndex, b.depthIndex};
  });
  return out;
}

std::string eddiesToJson(const std::vector<EddyDescriptor>& eddies) {
  static constexpr std::array<const char*, kRadialAxes> names{"E", "NE", "N", "NW", "W", "SW", "S", "SE"};
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : eddies) {
    nlohmann::json radii = nlohmann::json::object();
    for (int a = 0; a < kRadialAxes; ++a) radii[names[static_cast<std::size_t>(a)]] = e.boundaryRadii[static_cast<std::size_t>(a)];
    list.push_back({{"center", {{"lon", e.center[0]}, {"lat", e.center[1]}, {"depth", e.center[2]}}},
                    {"centerIndex", {e.depthIndex, e.latIndex, e.lonIndex}},
                    {"depthExtent", e.depthExtent},
                    {"depthLevels", e.depthLevels},
                    {"coreSpeed", e.coreSpeed},
                    {"persistence", geojson::number(e.persistence)},
                    {"radii", std::move(radii)},
                    {"windingAngle", e.windingAngle}});
  }
  return nlohmann::json{{"eddies", std::move(list)}}.dump(2);
}

std::string eddiesToGeoJson(const std::vector<EddyDescriptor>& eddies, Metric metric) {
  std::vector<nlohmann::json> features;
  for (std::size_t k = 0; k < eddies.size(); ++k) {
    const auto& e = eddies[k];
    features.push_back(geojson::point({e.center[0], e.center[1], e.center[2]},
                                      {{"eddy", k}, {"kind", "center"}, {"windingAngle", e.windingAngle},
                                       {"depthExtent", e.depthExtent}}));
    for (const auto& line : e.streamlines) {
      std::vector<geojson::Position> coords;
      for (const auto& p : line.points) coords.push_back({p[0], p[1], p[2]});
      features.push_back(geojson::lineString(coords, {{"eddy", k},
                                                      {"kind", "streamline"},
                                                      {"length", geojson::number(line.length(metric))},
                                                      {"meanSpeed", geojson::number(line.meanSpeed())}}));
    }
  }
  return geojson::featureCollection(std::move(features)).dump();
}

}  // namespace oceanscope
