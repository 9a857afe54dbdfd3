#include "front_oracle.hpp"

#include <cmath>
#include <deque>

namespace oracle {

using namespace oceanscope;

namespace {

struct Dims {
  Index D, H, W;
  Index at(Index d, Index i, Index j) const { return (d * H + i) * W + j; }
};

std::vector<VoxelSet> frontsOfStep(const std::vector<float>& values, const Dims& s, double threshold, int n) {
  std::vector<char> iso(values.size(), 0), north(values.size(), 0), grown(values.size(), 0);
  for (std::size_t k = 0; k < values.size(); ++k) iso[k] = !std::isnan(values[k]) && values[k] >= threshold;

  for (Index d = 0; d < s.D; ++d) {
    for (Index i = 0; i < s.H; ++i) {
      for (Index j = 0; j < s.W; ++j) {
        if (!iso[s.at(d, i, j)]) continue;
        bool edge = false;
        for (Index a = i - 1; a <= i + 1; ++a)
          for (Index b = j - 1; b <= j + 1; ++b)
            if (a >= 0 && a < s.H && b >= 0 && b < s.W && !iso[s.at(d, a, b)]) edge = true;
        if (!edge) continue;
        if (i == s.H - 1 || !iso[s.at(d, i + 1, j)]) north[s.at(d, i, j)] = 1;
      }
    }
  }

  const Index r = (n - 1) / 2;
  for (Index d = 0; d < s.D; ++d) {
    for (Index i = 0; i < s.H; ++i) {
      for (Index j = 0; j < s.W; ++j) {
        bool hit = false;
        for (Index dd = d - 1; dd <= d && !hit; ++dd) {
          if (dd < 0) continue;
          for (Index a = i - r; a <= i + r && !hit; ++a)
            for (Index b = j - r; b <= j + r && !hit; ++b)
              if (a >= 0 && a < s.H && b >= 0 && b < s.W && north[s.at(dd, a, b)]) hit = true;
        }
        grown[s.at(d, i, j)] = hit;
      }
    }
  }

  std::vector<int> component(values.size(), -1);
  int count = 0;
  for (Index d = 0; d < s.D; ++d) {
    for (Index i = 0; i < s.H; ++i) {
      for (Index j = 0; j < s.W; ++j) {
        if (!grown[s.at(d, i, j)] || component[s.at(d, i, j)] >= 0) continue;
        std::deque<std::array<Index, 3>> queue{{d, i, j}};
        component[s.at(d, i, j)] = count;
        while (!queue.empty()) {
          const auto [cd, ci, cj] = queue.front();
          queue.pop_front();
          for (Index a = cd - 1; a <= cd + 1; ++a)
            for (Index b = ci - 1; b <= ci + 1; ++b)
              for (Index c = cj - 1; c <= cj + 1; ++c) {
                if (a < 0 || a >= s.D || b < 0 || b >= s.H || c < 0 || c >= s.W) continue;
                const Index k = s.at(a, b, c);
                if (grown[k] && component[k] < 0) {
                  component[k] = count;
                  queue.push_back({a, b, c});
                }
              }
        }
        ++count;
      }
    }
  }

  std::map<int, VoxelSet> byComponent;
  for (std::size_t k = 0; k < values.size(); ++k)
    if (north[k]) byComponent[component[k]].insert(static_cast<Index>(k));
  std::vector<VoxelSet> out;
  for (auto& [c, voxels] : byComponent) out.push_back(std::move(voxels));
  return out;
}

}  // namespace

BruteGraph bruteForceTrackGraph(const Dataset& dataset, const std::string& variable, double threshold, int n,
                                TimeRange range) {
  const SpatialGrid& g = *dataset.spatialGrid();
  const Dims s{g.nDepth(), g.nLat(), g.nLon()};
  BruteGraph out;
  for (Index t = range.begin; t < range.end; ++t) {
    const ScalarVolume field = dataset.loadTimeStep(t, variable);
    std::vector<float> values(static_cast<std::size_t>(field.size()));
    for (Index d = 0; d < s.D; ++d)
      for (Index i = 0; i < s.H; ++i)
        for (Index j = 0; j < s.W; ++j) values[static_cast<std::size_t>(s.at(d, i, j))] = field(d, i, j);
    out.fronts.push_back(frontsOfStep(values, s, threshold, n));
  }

  for (std::size_t k = 0; k + 1 < out.fronts.size(); ++k) {
    std::map<Index, Index> labelAt, labelNext;
    for (std::size_t c = 0; c < out.fronts[k].size(); ++c)
      for (Index v : out.fronts[k][c]) labelAt[v] = static_cast<Index>(c);
    for (std::size_t c = 0; c < out.fronts[k + 1].size(); ++c)
      for (Index v : out.fronts[k + 1][c]) labelNext[v] = static_cast<Index>(c);
    for (const auto& [v, from] : labelAt) {
      const Index d = v / (s.H * s.W), i = (v / s.W) % s.H, j = v % s.W;
      for (const auto& [w, to] : labelNext) {
        const Index d2 = w / (s.H * s.W), i2 = (w / s.W) % s.H, j2 = w % s.W;
        if (d2 != d) continue;
        if ((i2 - i) * (i2 - i) + (j2 - j) * (j2 - j) <= static_cast<Index>(n) * n) {
          out.arcs.insert({range.begin + static_cast<Index>(k), from, to});
        }
      }
    }
  }
  return out;
}

std::string compareGraphs(const TrackGraph& graph, const std::vector<FrontLabels>& labels, const BruteGraph& brute,
                          Index firstStep) {
  if (labels.size() != brute.fronts.size()) return "step count differs";
  // brute component -> implementation label, per step
  std::vector<std::map<Index, std::int32_t>> mapping(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const auto& fronts = labels[k].fronts;
    if (fronts.size() != brute.fronts[k].size()) {
      return "step " + std::to_string(k) + ": " + std::to_string(fronts.size()) + " fronts vs oracle " +
             std::to_string(brute.fronts[k].size());
    }
    std::set<std::int32_t> used;
    for (std::size_t c = 0; c < brute.fronts[k].size(); ++c) {
      const VoxelSet& want = brute.fronts[k][c];
      const std::int32_t label = labels[k].labels.values()[*want.begin()];
      const auto& f = fronts[static_cast<std::size_t>(label - 1)];
      if (VoxelSet(f.voxels.begin(), f.voxels.end()) != want) {
        return "step " + std::to_string(k) + ": voxel sets of front " + std::to_string(label) + " differ";
      }
      if (!used.insert(label).second) return "two oracle components map to one front";
      mapping[k][static_cast<Index>(c)] = label;
    }
  }
  std::set<std::array<Index, 3>> mapped;
  for (const auto& a : brute.arcs) {
    const auto k = static_cast<std::size_t>(a[0] - firstStep);
    mapped.insert({a[0], mapping[k].at(a[1]), mapping[k + 1].at(a[2])});
  }
  std::set<std::array<Index, 3>> actual;
  for (const auto& a : graph.arcs) actual.insert({a.fromT, a.fromLabel, a.toLabel});
  if (mapped != actual) {
    return "arc sets differ: " + std::to_string(actual.size()) + " vs oracle " + std::to_string(mapped.size());
  }
  std::size_t vertices = 0;
  for (const auto& f : brute.fronts) vertices += f.size();
  if (graph.vertices.size() != vertices) return "vertex count differs";
  return {};
}

}  // namespace oracle
