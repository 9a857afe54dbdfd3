#pragma once

#include <array>
#include <string>
#include <vector>

#include "oceanscope/grid.hpp"

namespace oceanscope {

enum class PartitionScheme { depthSlab, latLonBlocks };

std::string_view toString(PartitionScheme scheme);
PartitionScheme parsePartitionScheme(std::string_view text);

struct IndexRange {
  Index begin = 0;
  Index end = 0;

  Index size() const { return end - begin; }
  bool contains(Index k) const { return k >= begin && k < end; }
  bool operator==(const IndexRange&) const = default;
};

/// Box of voxel indices (depth, lat, lon).
struct Block {
  IndexRange depth, lat, lon;

  Index voxels() const { return depth.size() * lat.size() * lon.size(); }
  bool contains(Index d, Index i, Index j) const { return depth.contains(d) && lat.contains(i) && lon.contains(j); }
  bool operator==(const Block&) const = default;
};

struct PartitionPlan {
  PartitionScheme scheme = PartitionScheme::depthSlab;
  std::array<Index, 3> shape{};  // (D, NLat, NLon)
  std::vector<Block> blocks;
  Index ghostWidth = 1;
  std::vector<int> ownerOf;  // block -> worker id

  /// Block expanded by the ghost width on faces interior to the domain.
  Block withGhost(std::size_t block) const;
  Index ghostVoxels(std::size_t block) const { return withGhost(block).voxels() - blocks[block].voxels(); }
  /// Index of the block whose interior holds the voxel.
  std::size_t blockOf(Index d, Index i, Index j) const;
};

struct BalanceReport {
  std::vector<Index> perBlockOceanVoxels;
  double imbalance = 1.0;  // max / mean
  Index ghostCellCount = 0;
};

/// Contiguous runs of [0, n) whose lengths differ by at most one.
std::vector<IndexRange> splitEvenly(Index n, Index parts);

PartitionPlan planPartition(const SpatialGrid& grid, Index workers, PartitionScheme scheme, Index ghostWidth = 1);

BalanceReport balanceReport(const PartitionPlan& plan, const BinaryVolume& oceanMask);

/// Copy of the voxels inside `box`, on the matching sub-grid.
template <typename Scalar>
Volume<Scalar> extractBox(const Volume<Scalar>& field, const Block& box) {
  const SpatialGrid& g = field.grid();
  auto sub = [](const GridAxis& a, IndexRange r) {
    return std::vector<double>(a.coords().begin() + r.begin, a.coords().begin() + r.end);
  };
  Volume<Scalar> out(makeSpatialGrid(sub(g.depth, box.depth), sub(g.lat, box.lat), sub(g.lon, box.lon)));
  for (Index d = 0; d < box.depth.size(); ++d)
    for (Index i = 0; i < box.lat.size(); ++i)
      for (Index j = 0; j < box.lon.size(); ++j)
        out(d, i, j) = field(box.depth.begin + d, box.lat.begin + i, box.lon.begin + j);
  return out;
}

std::string planToJson(const PartitionPlan& plan);
std::string balanceToJson(const BalanceReport& report);

}  // namespace oceanscope
