#include "oceanscope/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "oceanscope/fronts.hpp"
#include "oceanscope/raw_format.hpp"
#include "oceanscope/track_graph.hpp"
#include "oceanscope/worker_pool.hpp"

namespace oceanscope {

namespace fs = std::filesystem;

std::string_view toString(BenchSuite suite) {
  switch (suite) {
    case BenchSuite::weakScaling: return "weakScaling";
    case BenchSuite::strongScaling: return "strongScaling";
    case BenchSuite::resolutionScaling: return "resolutionScaling";
    case BenchSuite::ioLoad: return "ioLoad";
  }
  return "?";
}

BenchSuite parseBenchSuite(std::string_view text) {
  for (auto s : {BenchSuite::weakScaling, BenchSuite::strongScaling, BenchSuite::resolutionScaling, BenchSuite::ioLoad}) {
    if (text == toString(s)) return s;
  }
  fail(ErrorCode::validation, "unknown benchmark suite '" + std::string(text) +
                                  "' (weakScaling, strongScaling, resolutionScaling, ioLoad)");
}

void BenchParams::validate() const {
  if (workers.empty() || std::any_of(workers.begin(), workers.end(), [](std::size_t w) { return w < 1; })) {
    fail(ErrorCode::invalidParameter, "benchmark worker counts must be >= 1");
  }
  if (scales.empty() || std::any_of(scales.begin(), scales.end(), [](double s) { return !(s >= 1.0); })) {
    fail(ErrorCode::invalidParameter, "benchmark scales must be >= 1");
  }
  if (fixedWorkers < 1) fail(ErrorCode::invalidParameter, "fixed worker count must be >= 1");
  if (repeats < 1) fail(ErrorCode::invalidParameter, "repeats must be >= 1");
  if (n < 1 || n % 2 == 0) fail(ErrorCode::invalidParameter, "n must be a positive odd integer");
}

synthetic::FixtureSpec scaledFixture(const synthetic::FixtureSpec& base, double scale) {
  const double f = std::sqrt(scale);
  synthetic::FixtureSpec s = base;
  s.lats = static_cast<Index>(std::llround(static_cast<double>(base.lats) * f));
  s.lons = static_cast<Index>(std::llround(static_cast<double>(base.lons) * f));
  s.spacing = base.spacing / f;
  return s;
}

std::uintmax_t estimatedFootprint(const synthetic::FixtureSpec& spec) {
  const auto voxels = static_cast<std::uintmax_t>(spec.depths * spec.lats * spec.lons);
  const std::uintmax_t vars = 1 + (spec.temperature ? 1 : 0) + (spec.velocity ? 2 : 0);
  // source floats for every step, plus per-step masks and labels while extracting
  return voxels * static_cast<std::uintmax_t>(spec.steps) * (vars * 4 + 4 + 3) + voxels * 24;
}

std::uintmax_t availableMemoryBytes() {
  std::ifstream in("/proc/meminfo");
  std::string key;
  std::uintmax_t kb = 0;
  std::string unit;
  while (in >> key >> kb >> unit) {
    if (key == "MemAvailable:") return kb * 1024;
  }
  const long pages = sysconf(_SC_AVPHYS_PAGES), size = sysconf(_SC_PAGE_SIZE);
  return pages > 0 && size > 0 ? static_cast<std::uintmax_t>(pages) * static_cast<std::uintmax_t>(size)
                               : std::numeric_limits<std::uintmax_t>::max();
}

namespace {

std::string nowStamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

template <typename F>
double timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

class Sweep {
 public:
  Sweep(const BenchParams& params) : params_(params) {
    limit_ = params.memoryLimitBytes.value_or(availableMemoryBytes() / 2);
  }

  /// False when the point does not fit; the sweep then stops.
  bool admit(const synthetic::FixtureSpec& spec, double scale) {
    const std::uintmax_t need = estimatedFootprint(spec);
    if (need <= limit_) return true;
    result.aborted = true;
    result.abortReason = fmt::format("scale {} needs about {} MiB, limit {} MiB", scale, need >> 20, limit_ >> 20);
    spdlog::warn("benchmark stopped: {}", result.abortReason);
    return false;
  }

  void trackGraphPoint(const Dataset& ds, std::size_t workers, double scale) {
    WorkerPool pool(workers);
    IsovolumeSpec iso;
    for (int r = 0; r < params_.repeats; ++r) {
      const double s = timed([&] { buildTrackGraph(ds, iso, params_.n, ds.allSteps(), pool); });
      result.records.push_back({"buildTrackGraph", workers, scale, s, nowStamp()});
    }
    spdlog::info("buildTrackGraph workers={} scale={} median={:.4f} s", workers, scale,
                 medianWallClock(result.records, workers, scale));
    done(scale);
  }

  void done(double scale) {
    result.largestCompletedScale = std::max(result.largestCompletedScale.value_or(scale), scale);
  }

  BenchResult result;

 private:
  const BenchParams& params_;
  std::uintmax_t limit_;
};

}  // namespace

BenchResult runBenchmark(BenchSuite suite, const BenchParams& params) {
  params.validate();
  Sweep sweep(params);
  switch (suite) {
    case BenchSuite::strongScaling: {
      if (!sweep.admit(params.base, 1.0)) break;
      const Dataset ds = synthetic::translatingBlobFixture(params.base);
      for (std::size_t w : params.workers) sweep.trackGraphPoint(ds, w, 1.0);
      break;
    }
    case BenchSuite::weakScaling: {
      for (std::size_t w : params.workers) {
        synthetic::FixtureSpec spec = params.base;
        spec.steps = params.base.steps * static_cast<Index>(w);
        const double scale = static_cast<double>(w);
        if (!sweep.admit(spec, scale)) break;
        sweep.trackGraphPoint(synthetic::translatingBlobFixture(spec), w, scale);
      }
      break;
    }
    case BenchSuite::resolutionScaling: {
      for (double scale : params.scales) {
        const synthetic::FixtureSpec spec = scaledFixture(params.base, scale);
        if (!sweep.admit(spec, scale)) break;
        sweep.trackGraphPoint(synthetic::translatingBlobFixture(spec), params.fixedWorkers, scale);
      }
      break;
    }
    case BenchSuite::ioLoad: {
      if (!sweep.admit(params.base, 1.0)) break;
      const fs::path dir = params.scratch.empty() ? fs::temp_directory_path() / fmt::format("oceanscope-ioload-{}", getpid())
                                                  : params.scratch;
      writeRaw(synthetic::translatingBlobFixture(params.base), dir);
      for (std::size_t w : params.workers) {
        const Dataset ds = ingestRaw(dir, {"salinity"});
        WorkerPool pool(w);
        for (int r = 0; r < params.repeats; ++r) {
          ds.clearTimingLog();
          pool.parallelFor(static_cast<std::size_t>(ds.timeSteps()),
                           [&](std::size_t t) { (void)ds.loadTimeStep(static_cast<Index>(t), "salinity"); });
          double total = 0.0;
          const auto log = ds.timingLog();
          for (const auto& e : log) total += e.seconds;
          sweep.result.records.push_back({"loadTimeStep", w, 1.0, total / static_cast<double>(log.size()), nowStamp()});
        }
        spdlog::info("loadTimeStep workers={} median per-step={:.6f} s", w, medianWallClock(sweep.result.records, w, 1.0));
      }
      sweep.done(1.0);
      if (params.scratch.empty()) fs::remove_all(dir);
      break;
    }
  }
  return std::move(sweep.result);
}

std::string benchmarkCsv(const std::vector<BenchmarkRecord>& records) {
  std::string out = "operation,workers,scale,seconds\n";
  for (const auto& r : records) out += fmt::format("{},{},{},{:.9g}\n", r.operation, r.workers, r.dataScale, r.wallClock);
  return out;
}

double medianWallClock(const std::vector<BenchmarkRecord>& records, std::size_t workers, double scale) {
  std::vector<double> v;
  for (const auto& r : records)
    if (r.workers == workers && r.dataScale == scale) v.push_back(r.wallClock);
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace oceanscope
