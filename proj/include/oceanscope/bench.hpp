#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oceanscope/synthetic.hpp"

namespace oceanscope {

enum class BenchSuite { weakScaling, strongScaling, resolutionScaling, ioLoad };

std::string_view toString(BenchSuite suite);
BenchSuite parseBenchSuite(std::string_view text);

struct BenchmarkRecord {
  std::string operation;
  std::size_t workers = 1;
  double dataScale = 1.0;  // multiple of the base volume V
  double wallClock = 0.0;  // seconds
  std::string timestamp;
};

struct BenchParams {
  /// Base volume V: salinity-only translating-blob fixture.
  synthetic::FixtureSpec base = [] {
    synthetic::FixtureSpec s;
    s.depths = 16;
    s.lats = 32;
    s.lons = 32;
    s.steps = 4;
    s.temperature = false;
    s.velocity = false;
    return s;
  }();
  std::vector<std::size_t> workers{1, 2, 4, 8};
  std::vector<double> scales{1.0, 4.0, 16.0};
  std::size_t fixedWorkers = 1;  // resolution scaling
  int repeats = 3;
  int n = 3;                                         // track-graph neighborhood
  std::optional<std::uintmax_t> memoryLimitBytes;    // default: half of available memory
  std::filesystem::path scratch;                     // ioLoad staging; default: temp dir

  void validate() const;
};

struct BenchResult {
  std::vector<BenchmarkRecord> records;  // one per repeat
  bool aborted = false;
  std::string abortReason;
  std::optional<double> largestCompletedScale;
};

/// Weak: time steps grow with workers. Strong: fixed data, worker sweep.
/// Resolution: fixed workers, horizontal refinement to each scale. ioLoad:
/// per-step raw load time with all workers reading concurrently. A point
/// whose estimated footprint exceeds the memory limit stops the sweep.
BenchResult runBenchmark(BenchSuite suite, const BenchParams& params);

/// Fixture spec for `scale` times the base volume (lat/lon grow by sqrt(scale)).
synthetic::FixtureSpec scaledFixture(const synthetic::FixtureSpec& base, double scale);

/// Rough peak bytes of building a track graph on `spec`.
std::uintmax_t estimatedFootprint(const synthetic::FixtureSpec& spec);

/// operation,workers,scale,seconds
std::string benchmarkCsv(const std::vector<BenchmarkRecord>& records);

/// Median wall clock of the records matching (workers, scale); NaN when none.
double medianWallClock(const std::vector<BenchmarkRecord>& records, std::size_t workers, double scale);

std::uintmax_t availableMemoryBytes();

}  // namespace oceanscope
