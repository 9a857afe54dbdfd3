#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

#include "oceanscope/grid.hpp"
#include "oceanscope/partition.hpp"

namespace oceanscope {

class WorkerPool;

enum class Comparison { geq, leq, interval };

/// Threshold condition selecting the water mass (default: salinity >= 35 psu).
struct IsovolumeSpec {
  std::string variable = "salinity";
  Comparison comparison = Comparison::geq;
  double threshold = 35.0;
  double lo = 0.0;  // interval bounds
  double hi = 0.0;

  void validate() const;
  bool accepts(double value) const;
};

/// 1 where the value satisfies the spec; land (NaN) is always 0.
BinaryVolume extractIsovolume(const ScalarVolume& field, const IsovolumeSpec& spec);

/// Inner boundary per depth slice: the 3×3 lat-lon mean (in-domain
/// neighbors only) lies strictly in (0,1) and the voxel itself is set.
BinaryVolume boundaryGrid(const BinaryVolume& iso);

/// Boundary voxels whose northern neighbor (lat index + 1, same depth and
/// lon) is outside the isovolume or beyond the domain edge.
BinaryVolume northFacing(const BinaryVolume& boundary, const BinaryVolume& iso);

/// Same result as northFacing(boundaryGrid(iso), iso), computed block by
/// block over a partition plan. Each block sees its ghost layer; voxels
/// outside block + ghost are treated as beyond the domain edge.
BinaryVolume northFacingPartitioned(const BinaryVolume& iso, const PartitionPlan& plan, WorkerPool* pool = nullptr);

struct SurfaceFront {
  Index timeStep = 0;
  std::int32_t label = 0;
  std::vector<Index> voxels;      // linear indices, ascending
  double depthMin = 0.0;          // meters
  double depthMax = 0.0;
  Eigen::Vector3d centroid{0, 0, 0};  // (lat, lon, depth)
};

struct FrontLabels {
  LabeledVolume labels;
  std::vector<SurfaceFront> fronts;  // fronts[k].label == k + 1
};

/// Dilates every north-facing voxel to an n×n lat-lon square on its own and
/// the next depth level, labels the dilated grid with 26-connectivity and
/// keeps those labels on the original north-facing voxels. Labels are
/// renumbered 1..K in raster order of each front's first voxel.
FrontLabels groupFronts(const BinaryVolume& northFacingVoxels, int n, Index timeStep = 0);

/// Full per-step pipeline: isovolume, boundary, north-facing, grouping.
FrontLabels extractFronts(const ScalarVolume& field, const IsovolumeSpec& spec, int n, Index timeStep = 0);

struct Arc {
  Index fromT = 0;
  std::int32_t fromLabel = 0;
  std::int32_t toLabel = 0;

  auto operator<=>(const Arc&) const = default;
};

/// Integer offsets (di, dj) with di² + dj² <= n².
std::vector<std::pair<Index, Index>> diskOffsets(int n);

/// Arcs (t, label(p)) -> (t+1, l) for every label l of step t+1 inside the
/// radius-n disk (same depth) around each labeled voxel p of step t.
/// Sorted, without duplicates.
std::vector<Arc> correspondenceArcs(const LabeledVolume& labelsT, const LabeledVolume& labelsT1, int n,
                                    Index fromT = 0);

}  // namespace oceanscope
