#pragma once

#include <string>
#include <vector>

#include "oceanscope/dataset.hpp"
#include "oceanscope/fronts.hpp"

namespace oceanscope {

struct TrackVertex {
  Index t = 0;
  std::int32_t label = 0;
  Eigen::Vector3d centroid{0, 0, 0};  // (lat, lon, depth)
  Index voxelCount = 0;
  double depthMin = 0.0;
  double depthMax = 0.0;
};

/// Fronts per time step (vertices) and correspondence between consecutive
/// steps (arcs). Vertices are ordered by (t, label), arcs lexicographically.
struct TrackGraph {
  int n = 3;
  std::vector<TrackVertex> vertices;
  std::vector<Arc> arcs;

  /// Position of (t, label) in `vertices`, or -1.
  Index vertexIndex(Index t, std::int32_t label) const;
};

/// Vertex sequence of one track, earliest step first.
struct Track {
  std::vector<Index> vertices;  // indices into TrackGraph::vertices
  Index length() const { return static_cast<Index>(vertices.size()); }
};

/// Assembles a graph from per-step labelings already computed.
TrackGraph assembleTrackGraph(const std::vector<FrontLabels>& steps, Index firstStep, int n, WorkerPool* pool = nullptr);

/// Fronts for every step of `range` in parallel, then arcs between
/// consecutive steps once both endpoints are done.
TrackGraph buildTrackGraph(const Dataset& dataset, const IsovolumeSpec& spec, int n, TimeRange range,
                           WorkerPool& pool);

/// The k longest directed paths starting at vertices without incoming arcs,
/// found by dynamic programming. Ties: earlier start step, then smaller
/// start label, then lexicographic vertex order.
std::vector<Track> longestTracks(const TrackGraph& graph, int k);

std::string trackGraphToJson(const TrackGraph& graph);

/// LineString per track through the vertex centroids (lon, lat).
std::string tracksToGeoJson(const TrackGraph& graph, const std::vector<Track>& tracks);

}  // namespace oceanscope
