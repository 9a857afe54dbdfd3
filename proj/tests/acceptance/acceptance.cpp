// Acceptance suite: one PASS/FAIL line per criterion. `--only <id>` runs a
// single criterion, `--list` prints the ids.

#include <CLI11.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "front_oracle.hpp"
#include "oceanscope/bench.hpp"
#include "oceanscope/cinema.hpp"
#include "oceanscope/derived.hpp"
#include "oceanscope/eddy.hpp"
#include "oceanscope/flow.hpp"
#include "oceanscope/fronts.hpp"
#include "oceanscope/partition.hpp"
#include "oceanscope/synthetic.hpp"
#include "oceanscope/track_graph.hpp"
#include "oceanscope/worker_pool.hpp"

using namespace oceanscope;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kOracleSeconds = 10.0;
constexpr double kStrongSpeedup = 3.0;
constexpr double kStrongSlack = 0.10;
constexpr double kResolutionLo = 3.0, kResolutionHi = 6.0;
constexpr double kWeakGrowth = 0.50;
constexpr double kCenterVoxels = 1.0;
constexpr double kRadiusRelative = 0.10;
constexpr double kAnalyticTol = 1e-9;
constexpr double kRk4Factor = 12.0;
constexpr int kFuzzValues = 1'000'000;
constexpr int kChiSeeds = 100'000;
constexpr double kChiAlpha = 0.01;
constexpr int kBenchRepeats = 5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::function<Outcome()> run;
};

fs::path scratchDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / fmt::format("oceanscope-acceptance-{}-{}", name, getpid());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

double seconds(const std::function<void()>& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string hostNote() { return fmt::format("host threads={}", std::thread::hardware_concurrency()); }

Outcome frontOracle() {
  synthetic::FixtureSpec spec;
  spec.depths = 16;
  spec.lats = 32;
  spec.lons = 32;
  spec.steps = 6;
  const Dataset ds = synthetic::translatingBlobFixture(spec);
  IsovolumeSpec iso;
  WorkerPool pool(1);
  for (int n : {1, 3, 5}) {
    TrackGraph graph;
    const double elapsed = seconds([&] { graph = buildTrackGraph(ds, iso, n, ds.allSteps(), pool); });
    std::vector<FrontLabels> labels;
    for (Index t = 0; t < ds.timeSteps(); ++t) labels.push_back(extractFronts(ds.loadTimeStep(t, "salinity"), iso, n, t));
    const auto brute = oracle::bruteForceTrackGraph(ds, "salinity", iso.threshold, n, ds.allSteps());
    const std::string diff = oracle::compareGraphs(graph, labels, brute, 0);
    if (!diff.empty()) return {false, fmt::format("n={}: {}", n, diff)};
    if (elapsed >= kOracleSeconds) return {false, fmt::format("n={}: {:.2f} s >= {} s", n, elapsed, kOracleSeconds)};
    if (graph.vertices.empty() || graph.arcs.empty()) return {false, fmt::format("n={}: empty graph", n)};
    if (n == 5) {
      return {true, fmt::format("16x32x32x6, n in {{1,3,5}} isomorphic; n=5: {} vertices, {} arcs, {:.3f} s",
                                graph.vertices.size(), graph.arcs.size(), elapsed)};
    }
  }
  return {false, "unreachable"};
}

std::vector<std::pair<std::string, std::string>> directoryBytes(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    out.emplace_back(fs::relative(e.path(), dir).string(), std::string(std::istreambuf_iterator<char>(in), {}));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome determinism() {
  const Dataset ds = synthetic::standardFixture();
  const fs::path root = scratchDir("determinism");
  std::string refGraph, refEddies;
  std::vector<std::pair<std::string, std::string>> refDb;
  EddyParams ep;
  for (std::size_t w : {1, 2, 4, 8}) {
    WorkerPool pool(w);
    const std::string graph = trackGraphToJson(buildTrackGraph(ds, IsovolumeSpec{}, 3, ds.allSteps(), pool));
    std::string eddies;
    for (Index t = 0; t < ds.timeSteps(); ++t) eddies += eddiesToJson(detectEddies(ds.loadVelocity(t), ep, &pool));
    const fs::path dir = root / fmt::format("w{}", w);
    generateDatabase(ds, {"salinity", "temperature", "u", "v", "speed"}, ds.allSteps(), dir, pool);
    const auto db = directoryBytes(dir);
    if (w == 1) {
      refGraph = graph;
      refEddies = eddies;
      refDb = db;
      if (eddies.find("\"center\"") == std::string::npos) return {false, "no eddies detected on the fixture"};
      continue;
    }
    if (graph != refGraph) return {false, fmt::format("track graph differs at {} workers", w)};
    if (eddies != refEddies) return {false, fmt::format("eddy list differs at {} workers", w)};
    if (db != refDb) return {false, fmt::format("cinema database differs at {} workers", w)};
  }
  fs::remove_all(root);
  return {true, fmt::format("graph {} B, eddies {} B, {} database files identical for 1/2/4/8 workers", refGraph.size(),
                            refEddies.size(), refDb.size())};
}

BenchParams benchBase() {
  BenchParams p;
  p.base.depths = 32;
  p.base.lats = 128;
  p.base.lons = 128;
  p.base.steps = 8;
  p.repeats = kBenchRepeats;
  return p;
}

Outcome strongScaling() {
  BenchParams p = benchBase();
  p.workers = {1, 2, 4, 8};
  const BenchResult r = runBenchmark(BenchSuite::strongScaling, p);
  std::vector<double> med;
  for (auto w : p.workers) med.push_back(medianWallClock(r.records, w, 1.0));
  int violations = 0;
  bool tooLarge = false;
  for (std::size_t k = 1; k < med.size(); ++k) {
    if (med[k] > med[k - 1]) {
      ++violations;
      if (med[k] > med[k - 1] * (1.0 + kStrongSlack)) tooLarge = true;
    }
  }
  const double speedup = med.front() / med.back();
  const bool pass = violations <= 1 && !tooLarge && speedup >= kStrongSpeedup;
  return {pass, fmt::format("medians 1/2/4/8 = {:.4f}/{:.4f}/{:.4f}/{:.4f} s, speedup {:.2f}x (need >= {}), {}", med[0],
                            med[1], med[2], med[3], speedup, kStrongSpeedup, hostNote())};
}

Outcome resolutionScaling() {
  BenchParams p = benchBase();
  p.base.depths = 32;
  p.base.lats = 64;
  p.base.lons = 64;
  p.base.steps = 8;
  p.scales = {1.0, 4.0, 16.0};
  const BenchResult r = runBenchmark(BenchSuite::resolutionScaling, p);
  if (r.aborted) return {false, "aborted: " + r.abortReason};
  std::vector<double> med;
  for (double s : p.scales) med.push_back(medianWallClock(r.records, 1, s));
  const double r1 = med[1] / med[0], r2 = med[2] / med[1];
  const bool pass = r1 >= kResolutionLo && r1 <= kResolutionHi && r2 >= kResolutionLo && r2 <= kResolutionHi;
  return {pass, fmt::format("V/4V/16V = {:.4f}/{:.4f}/{:.4f} s, ratios {:.2f} and {:.2f} (need [{}, {}])", med[0], med[1],
                            med[2], r1, r2, kResolutionLo, kResolutionHi)};
}

Outcome weakScaling() {
  BenchParams p = benchBase();
  p.base.steps = 2;
  p.workers = {1, 2, 4, 8};
  const BenchResult r = runBenchmark(BenchSuite::weakScaling, p);
  if (r.aborted) return {false, "aborted: " + r.abortReason};
  const double first = medianWallClock(r.records, 1, 1.0), last = medianWallClock(r.records, 8, 8.0);
  const double growth = last / first - 1.0;
  return {growth <= kWeakGrowth,
          fmt::format("1 worker/2 steps {:.4f} s, 8 workers/16 steps {:.4f} s, growth {:.0f}% (need <= {:.0f}%), {}", first,
                      last, 100.0 * growth, 100.0 * kWeakGrowth, hostNote())};
}

Outcome eddyAccuracy() {
  std::string detail;
  EddyParams ep;
  ep.metric = Metric::cartesian;
  for (Index n : {64, 128}) {
    const SpatialGridPtr g = synthetic::cartesianGrid(n, 1.0);
    const double h = g->lon[1] - g->lon[0];
    const double x0 = 0.1, y0 = -0.07;
    const auto lamb = synthetic::lambOseen<float>(g, 1.0, 0.2, x0, y0);
    const auto found = detectEddies(lamb, ep);
    if (found.size() != 1) return {false, fmt::format("Lamb-Oseen {}^2: {} detections", n, found.size())};
    const double off = std::hypot(found[0].center[0] - x0, found[0].center[1] - y0) / h;
    if (off > kCenterVoxels) return {false, fmt::format("Lamb-Oseen {}^2: center off by {:.2f} voxels", n, off)};

    const double R = 0.5;
    const auto rankine = synthetic::rankineWithOutflow<float>(g, R, 1.0, 0.5);
    const auto rk = detectEddies(rankine, ep);
    if (rk.size() != 1) return {false, fmt::format("Rankine {}^2: {} detections", n, rk.size())};
    double mean = 0.0, worst = 0.0;
    for (double radius : rk[0].boundaryRadii) {
      mean += radius / kRadialAxes;
      worst = std::max(worst, std::abs(radius - R) / R);
    }
    const double err = std::abs(mean - R) / R;
    if (err > kRadiusRelative) return {false, fmt::format("Rankine {}^2: mean radius error {:.1f}%", n, 100.0 * err)};

    const auto none1 = detectEddies(synthetic::uniformFlow<float>(g, 1.0, 0.3), ep);
    const auto none2 = detectEddies(synthetic::shearFlow<float>(g, 1.0), ep);
    if (!none1.empty() || !none2.empty()) {
      return {false, fmt::format("{}^2: uniform {} / shear {} detections", n, none1.size(), none2.size())};
    }
    detail += fmt::format("{}^2: center {:.2f} vox, radius err {:.1f}% (worst axis {:.1f}%); ", n, off, 100.0 * err,
                          100.0 * worst);
  }
  return {true, detail + "uniform and shear: 0"};
}

Outcome analyticDerivatives() {
  const SpatialGridPtr g = synthetic::cartesianGrid(33, 1.0, 2);
  const auto solid = synthetic::solidBody<double>(g, 1.0);
  const auto strain = synthetic::strainFlow<double>(g, 1.0);
  double worst = 0.0;
  auto check = [&](const VectorVolume<double>& vel, DerivedFieldKind kind, double want) {
    const auto f = derivedField(vel, kind, Metric::cartesian);
    worst = std::max(worst, (f.values() - want).abs().maxCoeff());
  };
  check(solid, DerivedFieldKind::okuboWeiss(), -4.0);
  check(solid, DerivedFieldKind::vorticity(), 2.0);
  check(strain, DerivedFieldKind::okuboWeiss(), 4.0);
  check(strain, DerivedFieldKind::vorticity(), 0.0);
  return {worst <= kAnalyticTol, fmt::format("max |error| {:.3g} over all voxels (tol {})", worst, kAnalyticTol)};
}

Outcome rk4Order() {
  const SpatialGridPtr g = synthetic::cartesianGrid(41, 1.0);
  const auto vel = synthetic::solidBody<float>(g, 1.0);
  const double r = 0.5, arc = 0.5 * kPi * r;
  auto endpointError = [&](double h) {
    IntegrationParams ip;
    ip.metric = Metric::cartesian;
    ip.stepSize = h;
    ip.maxSteps = static_cast<Index>(std::llround(arc / h));
    const Polyline line = streamline(vel, GeoPoint(r, 0.0, g->depth[0]), ip);
    const GeoPoint& end = line.points.back();
    return std::hypot(end[0] - 0.0, end[1] - r);
  };
  std::string detail;
  double worstFactor = std::numeric_limits<double>::infinity();
  const double steps[] = {arc / 4, arc / 8, arc / 16};
  for (int k = 0; k + 1 < 3; ++k) {
    const double e1 = endpointError(steps[k]), e2 = endpointError(steps[k + 1]);
    worstFactor = std::min(worstFactor, e1 / e2);
    detail += fmt::format("h={:.4f}: {:.3e} -> {:.3e} ({:.1f}x); ", steps[k], e1, e2, e1 / e2);
  }
  return {worstFactor >= kRk4Factor, detail + fmt::format("need >= {}x", kRk4Factor)};
}

Outcome floatRoundTrip() {
  std::mt19937_64 rng(20240611);
  FloatImage img(1000, 1000);
  float* data = img.data();
  const float specials[] = {std::numeric_limits<float>::quiet_NaN(), -std::numeric_limits<float>::quiet_NaN(),
                            std::numeric_limits<float>::infinity(), -std::numeric_limits<float>::infinity(),
                            std::numeric_limits<float>::denorm_min(), -std::numeric_limits<float>::denorm_min(),
                            0.0f, -0.0f, std::numeric_limits<float>::max(), std::numeric_limits<float>::lowest()};
  for (int k = 0; k < kFuzzValues; ++k) {
    switch (k % 4) {
      case 0: data[k] = std::bit_cast<float>(static_cast<std::uint32_t>(rng())); break;  // any pattern, NaN payloads too
      case 1: data[k] = std::bit_cast<float>(static_cast<std::uint32_t>(rng() & 0x807fffffu)); break;  // denormals
      case 2: data[k] = specials[rng() % std::size(specials)]; break;
      default: data[k] = std::uniform_real_distribution<float>(-40.0f, 40.0f)(rng); break;
    }
  }
  const FloatImage back = decodeFloatImage(encodeFloatImage(img));
  if (back.rows() != img.rows() || back.cols() != img.cols()) return {false, "shape changed"};
  if (std::memcmp(back.data(), img.data(), sizeof(float) * kFuzzValues) != 0) {
    Index bad = 0;
    for (int k = 0; k < kFuzzValues; ++k)
      bad += std::bit_cast<std::uint32_t>(back.data()[k]) != std::bit_cast<std::uint32_t>(data[k]);
    return {false, fmt::format("{} values changed bits", bad)};
  }

  const Dataset ds = synthetic::standardFixture();
  const fs::path dir = scratchDir("roundtrip");
  WorkerPool pool(1);
  const CinemaIndex index = generateDatabase(ds, {"u", "v", "speed"}, TimeRange{0, 2}, dir, pool);
  Index compared = 0;
  for (Index t = 0; t < 2; ++t) {
    const auto vel = ds.loadVelocity(t);
    const ScalarVolume core = speedField(vel);
    for (Index d = 0; d < vel.u.depths(); ++d) {
      const FloatImage u = readFloatImage(dir / cinemaFileName(t, d, "u", SliceOrientation::depth));
      const FloatImage v = readFloatImage(dir / cinemaFileName(t, d, "v", SliceOrientation::depth));
      const FloatImage s = readFloatImage(dir / cinemaFileName(t, d, "speed", SliceOrientation::depth));
      const FloatImage recomputed = (u.square() + v.square()).sqrt();
      const Index H = vel.u.rows();
      for (Index i = 0; i < H; ++i) {
        for (Index j = 0; j < vel.u.cols(); ++j) {
          const auto a = std::bit_cast<std::uint32_t>(recomputed(H - 1 - i, j));
          const auto b = std::bit_cast<std::uint32_t>(core(d, i, j));
          const auto c = std::bit_cast<std::uint32_t>(s(H - 1 - i, j));
          const bool bothNaN = std::isnan(core(d, i, j)) && std::isnan(recomputed(H - 1 - i, j)) && std::isnan(s(H - 1 - i, j));
          if (!bothNaN && (a != b || c != b)) {
            return {false, fmt::format("speed mismatch at t={} d={} i={} j={}", t, d, i, j)};
          }
          ++compared;
        }
      }
    }
  }
  fs::remove_all(dir);
  return {true, fmt::format("{} fuzzed values bit-exact; {} database speed pixels equal grid-core speed ({} images)",
                            kFuzzValues, compared, index.rows.size())};
}

Outcome seedWeighting() {
  const SpatialGridPtr g = synthetic::indexGrid(3, 12, 15);
  ScalarVolume weight(g, 0.0f);
  const Index td = 1, ti = 7, tj = 4;
  weight(td, ti, tj) = 2.5f;
  SeedSpec spec;
  spec.count = 5000;
  spec.strategy = SeedSpec::Strategy::weighted;
  spec.rngSeed = 7;
  const auto seeds = placeSeeds(weight, spec);
  Index inside = 0;
  for (const auto& s : seeds) {
    if (std::abs(s[2] - g->depth[td]) <= 0.5 && std::abs(s[1] - g->lat[ti]) <= 0.5 && std::abs(s[0] - g->lon[tj]) <= 0.5) {
      ++inside;
    }
  }
  if (inside != spec.count) return {false, fmt::format("point mass: {}/{} seeds in target voxel", inside, spec.count)};

  const SpatialGridPtr u = synthetic::indexGrid(1, 10, 10);
  ScalarVolume ocean(u, 1.0f);
  SeedSpec uni;
  uni.count = kChiSeeds;
  uni.rngSeed = 11;
  const auto points = placeSeeds(ocean, uni);
  std::vector<double> counts(100, 0.0);
  for (const auto& p : points) {
    const auto i = static_cast<Index>(std::lround(p[1])), j = static_cast<Index>(std::lround(p[0]));
    counts[static_cast<std::size_t>(i * 10 + j)] += 1.0;
  }
  const double expected = static_cast<double>(kChiSeeds) / 100.0;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const double critical = boost::math::quantile(boost::math::chi_squared(99.0), 1.0 - kChiAlpha);
  return {chi2 <= critical, fmt::format("point mass {}/{} in voxel; uniform chi2 = {:.1f} (critical {:.1f}, df 99, alpha {})",
                                        inside, spec.count, chi2, critical, kChiAlpha)};
}

Outcome ghostCells() {
  const Dataset ds = synthetic::standardFixture();
  const SpatialGrid& grid = *ds.spatialGrid();
  WorkerPool pool(2);
  const auto slab = planPartition(grid, 2, PartitionScheme::depthSlab, 1);
  const auto blocks = planPartition(grid, 4, PartitionScheme::latLonBlocks, 1);
  const auto noGhost = planPartition(grid, 4, PartitionScheme::latLonBlocks, 0);
  Index ones = 0, falsePositives = 0, falseNegatives = 0;
  for (Index t = 0; t < ds.timeSteps(); ++t) {
    const BinaryVolume iso = extractIsovolume(ds.loadTimeStep(t, "salinity"), IsovolumeSpec{});
    const BinaryVolume single = northFacing(boundaryGrid(iso), iso);
    const BinaryVolume a = northFacingPartitioned(iso, slab, &pool);
    const BinaryVolume b = northFacingPartitioned(iso, blocks, &pool);
    const BinaryVolume c = northFacingPartitioned(iso, noGhost, &pool);
    if (!(a.values() == single.values()).all()) return {false, fmt::format("t={}: depth slabs differ from single block", t)};
    if (!(b.values() == single.values()).all()) return {false, fmt::format("t={}: lat-lon blocks differ from single block", t)};
    ones += single.values().cast<Index>().sum();
    falsePositives += ((c.values() != 0) && (single.values() == 0)).cast<Index>().sum();
    falseNegatives += ((c.values() == 0) && (single.values() != 0)).cast<Index>().sum();
  }
  if (falsePositives + falseNegatives == 0) return {false, "partition without ghosts shows no errors"};
  return {true, fmt::format("{} north-facing voxels over {} steps; 2 depth slabs and 4 lat-lon blocks (ghost 1) match; "
                            "4 blocks without ghosts give {} false positives and {} misses",
                            ones, ds.timeSteps(), falsePositives, falseNegatives)};
}

std::vector<Criterion> criteria() {
  return {
      {"front-oracle", frontOracle},         {"determinism", determinism},
      {"strong-scaling", strongScaling},     {"resolution-scaling", resolutionScaling},
      {"weak-scaling", weakScaling},         {"eddy-accuracy", eddyAccuracy},
      {"okubo-weiss", analyticDerivatives},  {"rk4-order", rk4Order},
      {"float-roundtrip", floatRoundTrip},   {"seed-weighting", seedWeighting},
      {"ghost-cells", ghostCells},
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oceanscope acceptance criteria"};
  std::string only;
  bool list = false;
  app.add_option("--only", only, "Run one criterion");
  app.add_flag("--list", list, "Print criterion ids");
  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::warn);

  int failures = 0, ran = 0;
  for (const auto& c : criteria()) {
    if (list) {
      std::cout << c.id << '\n';
      continue;
    }
    if (!only.empty() && c.id != only) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << ": " << o.detail << std::endl;
  }
  if (!list && ran == 0) {
    std::cerr << "unknown criterion '" << only << "'\n";
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
