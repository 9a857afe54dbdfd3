#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oceanscope/dataset.hpp"
#include "oceanscope/track_graph.hpp"

namespace oracle {

using oceanscope::Index;

/// Flat voxel set of one front, indices into a (D, H, W) row-major volume.
using VoxelSet = std::set<Index>;

struct BruteGraph {
  std::vector<std::vector<VoxelSet>> fronts;  // [step][component]
  std::set<std::array<Index, 3>> arcs;        // (t, from component, to component)
};

/// Serial front tracking from first principles: threshold test per voxel,
/// 3×3 neighbor scans for the boundary, an explicit n×n×2 neighborhood scan
/// for dilation, breadth-first 26-connected flood fill, and a full-slice
/// distance scan for correspondence.
BruteGraph bruteForceTrackGraph(const oceanscope::Dataset& dataset, const std::string& variable, double threshold,
                                int n, oceanscope::TimeRange range);

/// Exact isomorphism: a bijection between components with equal voxel sets
/// that maps the arc sets onto each other. Empty string when equal.
std::string compareGraphs(const oceanscope::TrackGraph& graph, const std::vector<oceanscope::FrontLabels>& labels,
                          const BruteGraph& brute, Index firstStep);

}  // namespace oracle
