#include "oceanscope/partition.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <json.hpp>

namespace oceanscope {

std::string_view toString(PartitionScheme scheme) {
  return scheme == PartitionScheme::depthSlab ? "depthSlab" : "latLonBlocks";
}

PartitionScheme parsePartitionScheme(std::string_view text) {
  if (text == "depthSlab" || text == "depth-slab") return PartitionScheme::depthSlab;
  if (text == "latLonBlocks" || text == "lat-lon-blocks") return PartitionScheme::latLonBlocks;
  fail(ErrorCode::invalidParameter, "unknown partition scheme '" + std::string(text) + "'");
}

std::vector<IndexRange> splitEvenly(Index n, Index parts) {
  std::vector<IndexRange> out;
  const Index base = n / parts, extra = n % parts;
  Index cursor = 0;
  for (Index p = 0; p < parts; ++p) {
    const Index len = base + (p < extra ? 1 : 0);
    out.push_back({cursor, cursor + len});
    cursor += len;
  }
  return out;
}

Block PartitionPlan::withGhost(std::size_t block) const {
  const Block& b = blocks.at(block);
  auto grow = [g = ghostWidth](IndexRange r, Index n) {
    return IndexRange{std::max<Index>(0, r.begin - g), std::min(n, r.end + g)};
  };
  return {grow(b.depth, shape[0]), grow(b.lat, shape[1]), grow(b.lon, shape[2])};
}

std::size_t PartitionPlan::blockOf(Index d, Index i, Index j) const {
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].contains(d, i, j)) return b;
  }
  fail(ErrorCode::bounds, "voxel outside partitioned domain");
}

PartitionPlan planPartition(const SpatialGrid& grid, Index workers, PartitionScheme scheme, Index ghostWidth) {
  if (workers < 1) fail(ErrorCode::invalidParameter, "workers must be >= 1");
  if (ghostWidth < 0) fail(ErrorCode::invalidParameter, "ghost width must be >= 0");
  PartitionPlan plan;
  plan.scheme = scheme;
  plan.shape = {grid.nDepth(), grid.nLat(), grid.nLon()};
  plan.ghostWidth = ghostWidth;
  const IndexRange allDepth{0, grid.nDepth()}, allLat{0, grid.nLat()}, allLon{0, grid.nLon()};

  if (scheme == PartitionScheme::depthSlab) {
    if (workers > grid.nDepth()) {
      fail(ErrorCode::infeasible, std::to_string(workers) + " workers exceed " + std::to_string(grid.nDepth()) +
                                      " depth levels");
    }
    for (const IndexRange& r : splitEvenly(grid.nDepth(), workers)) plan.blocks.push_back({r, allLat, allLon});
  } else {
    // Factor pair (a along lat, b along lon) closest to the grid aspect ratio.
    const double aspect = static_cast<double>(grid.nLat()) / static_cast<double>(grid.nLon());
    Index bestA = 0;
    double bestScore = std::numeric_limits<double>::infinity();
    for (Index a = 1; a <= workers; ++a) {
      if (workers % a != 0) continue;
      const Index b = workers / a;
      if (a > grid.nLat() || b > grid.nLon()) continue;
      const double score = std::abs(static_cast<double>(a) / static_cast<double>(b) - aspect);
      if (score < bestScore) {
        bestScore = score;
        bestA = a;
      }
    }
    if (bestA == 0) {
      fail(ErrorCode::infeasible, "no lat-lon factorization of " + std::to_string(workers) + " workers fits the grid");
    }
    for (const IndexRange& ri : splitEvenly(grid.nLat(), bestA))
      for (const IndexRange& rj : splitEvenly(grid.nLon(), workers / bestA)) plan.blocks.push_back({allDepth, ri, rj});
  }
  plan.ownerOf.resize(plan.blocks.size());
  std::iota(plan.ownerOf.begin(), plan.ownerOf.end(), 0);
  return plan;
}

BalanceReport balanceReport(const PartitionPlan& plan, const BinaryVolume& oceanMask) {
  if (oceanMask.depths() != plan.shape[0] || oceanMask.rows() != plan.shape[1] || oceanMask.cols() != plan.shape[2]) {
    fail(ErrorCode::invalidInput, "mask shape does not match partition plan");
  }
  BalanceReport report;
  for (std::size_t b = 0; b < plan.blocks.size(); ++b) {
    const Block& blk = plan.blocks[b];
    Index count = 0;
    for (Index d = blk.depth.begin; d < blk.depth.end; ++d)
      for (Index i = blk.lat.begin; i < blk.lat.end; ++i)
        for (Index j = blk.lon.begin; j < blk.lon.end; ++j) count += oceanMask(d, i, j) ? 1 : 0;
    report.perBlockOceanVoxels.push_back(count);
    report.ghostCellCount += plan.ghostVoxels(b);
  }
  const double total = std::accumulate(report.perBlockOceanVoxels.begin(), report.perBlockOceanVoxels.end(), 0.0);
  const double mean = total / static_cast<double>(report.perBlockOceanVoxels.size());
  const auto maxCount = *std::max_element(report.perBlockOceanVoxels.begin(), report.perBlockOceanVoxels.end());
  report.imbalance = mean > 0.0 ? static_cast<double>(maxCount) / mean : 1.0;
  return report;
}

std::string planToJson(const PartitionPlan& plan) {
  nlohmann::json j;
  j["scheme"] = toString(plan.scheme);
  j["shape"] = plan.shape;
  j["ghostWidth"] = plan.ghostWidth;
  auto range = [](IndexRange r) { return nlohmann::json::array({r.begin, r.end}); };
  for (std::size_t b = 0; b < plan.blocks.size(); ++b) {
    const Block& blk = plan.blocks[b];
    const Block ghost = plan.withGhost(b);
    j["blocks"].push_back({{"depth", range(blk.depth)},
                           {"lat", range(blk.lat)},
                           {"lon", range(blk.lon)},
                           {"withGhost", {{"depth", range(ghost.depth)}, {"lat", range(ghost.lat)}, {"lon", range(ghost.lon)}}},
                           {"worker", plan.ownerOf[b]}});
  }
  return j.dump(2);
}

std::string balanceToJson(const BalanceReport& report) {
  nlohmann::json j;
  j["perBlockOceanVoxels"] = report.perBlockOceanVoxels;
  j["imbalance"] = report.imbalance;
  j["ghostCellCount"] = report.ghostCellCount;
  return j.dump(2);
}

}  // namespace oceanscope
