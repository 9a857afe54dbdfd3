#include "oceanscope/fronts.hpp"

#include <algorithm>
#include <cmath>

#include "oceanscope/labeling.hpp"
#include "oceanscope/worker_pool.hpp"

namespace oceanscope {

void IsovolumeSpec::validate() const {
  if (comparison == Comparison::interval && !(lo < hi)) {
    fail(ErrorCode::invalidParameter, "isovolume interval requires lo < hi");
  }
}

bool IsovolumeSpec::accepts(double value) const {
  if (std::isnan(value)) return false;
  switch (comparison) {
    case Comparison::geq: return value >= threshold;
    case Comparison::leq: return value <= threshold;
    case Comparison::interval: return value >= lo && value <= hi;
  }
  return false;
}

BinaryVolume extractIsovolume(const ScalarVolume& field, const IsovolumeSpec& spec) {
  spec.validate();
  BinaryVolume out(field.gridPtr(), 0);
  const auto& v = field.values();
  auto& bits = out.values();
  for (Index k = 0; k < field.size(); ++k) bits[k] = spec.accepts(v[k]) ? 1 : 0;
  return out;
}

namespace {

/// Per-slice 3×3 inner boundary and north-facing selection. Voxels outside
/// the volume count as "beyond the domain edge".
void boundaryAndNorth(const BinaryVolume& iso, BinaryVolume* boundary, BinaryVolume* north) {
  const Index D = iso.depths(), H = iso.rows(), W = iso.cols();
  for (Index d = 0; d < D; ++d) {
    const auto slice = iso.slice(d);
    for (Index i = 0; i < H; ++i) {
      const Index i0 = std::max<Index>(0, i - 1), i1 = std::min(H - 1, i + 1);
      for (Index j = 0; j < W; ++j) {
        if (!slice(i, j)) continue;
        const Index j0 = std::max<Index>(0, j - 1), j1 = std::min(W - 1, j + 1);
        const auto window = slice.block(i0, j0, i1 - i0 + 1, j1 - j0 + 1);
        const int ones = window.cast<int>().sum();
        // mean strictly inside (0,1); the voxel itself is set so the mean is > 0
        const bool isBoundary = ones < window.size();
        if (boundary) (*boundary)(d, i, j) = isBoundary ? 1 : 0;
        if (north && isBoundary) (*north)(d, i, j) = (i + 1 == H || !slice(i + 1, j)) ? 1 : 0;
      }
    }
  }
}

}  // namespace

BinaryVolume boundaryGrid(const BinaryVolume& iso) {
  BinaryVolume out(iso.gridPtr(), 0);
  boundaryAndNorth(iso, &out, nullptr);
  return out;
}

BinaryVolume northFacing(const BinaryVolume& boundary, const BinaryVolume& iso) {
  BinaryVolume out(boundary.gridPtr(), 0);
  const Index H = iso.rows();
  for (Index d = 0; d < iso.depths(); ++d)
    for (Index i = 0; i < H; ++i)
      for (Index j = 0; j < iso.cols(); ++j)
        if (boundary(d, i, j)) out(d, i, j) = (i + 1 == H || !iso(d, i + 1, j)) ? 1 : 0;
  return out;
}

BinaryVolume northFacingPartitioned(const BinaryVolume& iso, const PartitionPlan& plan, WorkerPool* pool) {
  BinaryVolume out(iso.gridPtr(), 0);
  auto runBlock = [&](std::size_t b) {
    const Block interior = plan.blocks[b];
    const Block halo = plan.withGhost(b);
    const BinaryVolume local = extractBox(iso, halo);
    BinaryVolume localNorth(local.gridPtr(), 0);
    boundaryAndNorth(local, nullptr, &localNorth);
    // Ghost voxels belong to another block; only interior results are kept.
    for (Index d = interior.depth.begin; d < interior.depth.end; ++d)
      for (Index i = interior.lat.begin; i < interior.lat.end; ++i)
        for (Index j = interior.lon.begin; j < interior.lon.end; ++j)
          out(d, i, j) = localNorth(d - halo.depth.begin, i - halo.lat.begin, j - halo.lon.begin);
  };
  if (pool) {
    pool->parallelFor(plan.blocks.size(), runBlock);
  } else {
    for (std::size_t b = 0; b < plan.blocks.size(); ++b) runBlock(b);
  }
  return out;
}

FrontLabels groupFronts(const BinaryVolume& northFacingVoxels, int n, Index timeStep) {
  if (n < 1 || n % 2 == 0) fail(ErrorCode::invalidParameter, "front neighborhood n must be a positive odd integer");
  const Index D = northFacingVoxels.depths(), H = northFacingVoxels.rows(), W = northFacingVoxels.cols();
  const Index r = (n - 1) / 2;

  // Separable dilation: n-wide along lon, then along lat, then onto d and d+1.
  BinaryVolume alongLon(northFacingVoxels.gridPtr(), 0), square(northFacingVoxels.gridPtr(), 0);
  for (Index d = 0; d < D; ++d) {
    for (Index i = 0; i < H; ++i) {
      Index lastSet = -W - r - 1;
      for (Index j = 0; j < W + r; ++j) {
        if (j < W && northFacingVoxels(d, i, j)) lastSet = j;
        const Index target = j - r;
        if (target >= 0 && target < W) {
          // any set voxel within [target - r, target + r]
          alongLon(d, i, target) = (j - lastSet <= 2 * r) ? 1 : 0;
        }
      }
    }
    for (Index j = 0; j < W; ++j) {
      Index lastSet = -H - r - 1;
      for (Index i = 0; i < H + r; ++i) {
        if (i < H && alongLon(d, i, j)) lastSet = i;
        const Index target = i - r;
        if (target >= 0 && target < H) square(d, target, j) = (i - lastSet <= 2 * r) ? 1 : 0;
      }
    }
  }
  BinaryVolume dilated = square;
  for (Index d = 1; d < D; ++d) dilated.slice(d) = dilated.slice(d).max(square.slice(d - 1));

  const LabeledVolume components = labelComponents26(dilated);

  FrontLabels result;
  result.labels = LabeledVolume(northFacingVoxels.gridPtr(), 0);
  std::vector<std::int32_t> renumber(static_cast<std::size_t>(labelCount(components)) + 1, 0);
  std::int32_t next = 0;
  for (Index k = 0; k < northFacingVoxels.size(); ++k) {
    if (!northFacingVoxels.values()[k]) continue;
    const std::int32_t c = components.values()[k];
    if (renumber[static_cast<std::size_t>(c)] == 0) renumber[static_cast<std::size_t>(c)] = ++next;
    result.labels.values()[k] = renumber[static_cast<std::size_t>(c)];
  }

  const SpatialGrid& g = northFacingVoxels.grid();
  result.fronts.resize(static_cast<std::size_t>(next));
  for (std::int32_t l = 1; l <= next; ++l) {
    auto& f = result.fronts[static_cast<std::size_t>(l - 1)];
    f.timeStep = timeStep;
    f.label = l;
    f.depthMin = std::numeric_limits<double>::infinity();
    f.depthMax = -std::numeric_limits<double>::infinity();
  }
  for (Index d = 0; d < D; ++d) {
    for (Index i = 0; i < H; ++i) {
      for (Index j = 0; j < W; ++j) {
        const std::int32_t l = result.labels(d, i, j);
        if (l == 0) continue;
        auto& f = result.fronts[static_cast<std::size_t>(l - 1)];
        f.voxels.push_back(result.labels.index(d, i, j));
        f.centroid += Eigen::Vector3d(g.lat[i], g.lon[j], g.depth[d]);
        f.depthMin = std::min(f.depthMin, g.depth[d]);
        f.depthMax = std::max(f.depthMax, g.depth[d]);
      }
    }
  }
  for (auto& f : result.fronts) f.centroid /= static_cast<double>(f.voxels.size());
  return result;
}

FrontLabels extractFronts(const ScalarVolume& field, const IsovolumeSpec& spec, int n, Index timeStep) {
  const BinaryVolume iso = extractIsovolume(field, spec);
  BinaryVolume north(iso.gridPtr(), 0);
  boundaryAndNorth(iso, nullptr, &north);
  return groupFronts(north, n, timeStep);
}

std::vector<std::pair<Index, Index>> diskOffsets(int n) {
  std::vector<std::pair<Index, Index>> out;
  for (Index di = -n; di <= n; ++di)
    for (Index dj = -n; dj <= n; ++dj)
      if (di * di + dj * dj <= static_cast<Index>(n) * n) out.emplace_back(di, dj);
  return out;
}

std::vector<Arc> correspondenceArcs(const LabeledVolume& labelsT, const LabeledVolume& labelsT1, int n, Index fromT) {
  if (!(labelsT.grid() == labelsT1.grid())) fail(ErrorCode::invalidInput, "labelings are on different grids");
  if (n < 1) fail(ErrorCode::invalidParameter, "correspondence radius n must be >= 1");
  const Index D = labelsT.depths(), H = labelsT.rows(), W = labelsT.cols();
  const auto disk = diskOffsets(n);
  const auto maxFrom = static_cast<std::size_t>(labelCount(labelsT));
  const auto maxTo = static_cast<std::size_t>(labelCount(labelsT1));
  // Arc incidence as a (from × to) bit matrix.
  std::vector<std::uint8_t> seen((maxFrom + 1) * (maxTo + 1), 0);
  for (Index d = 0; d < D; ++d) {
    const auto a = labelsT.slice(d);
    const auto b = labelsT1.slice(d);
    for (Index i = 0; i < H; ++i) {
      for (Index j = 0; j < W; ++j) {
        const std::int32_t from = a(i, j);
        if (from == 0) continue;
        for (const auto& [di, dj] : disk) {
          const Index ni = i + di, nj = j + dj;
          if (ni < 0 || ni >= H || nj < 0 || nj >= W) continue;
          const std::int32_t to = b(ni, nj);
          if (to != 0) seen[static_cast<std::size_t>(from) * (maxTo + 1) + static_cast<std::size_t>(to)] = 1;
        }
      }
    }
  }
  std::vector<Arc> arcs;
  for (std::size_t f = 1; f <= maxFrom; ++f)
    for (std::size_t t = 1; t <= maxTo; ++t)
      if (seen[f * (maxTo + 1) + t]) arcs.push_back({fromT, static_cast<std::int32_t>(f), static_cast<std::int32_t>(t)});
  return arcs;
}

}  // namespace oceanscope
