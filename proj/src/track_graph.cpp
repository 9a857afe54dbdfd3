#include "oceanscope/track_graph.hpp"

#include <algorithm>

#include <json.hpp>

#include "geojson.hpp"
#include "oceanscope/worker_pool.hpp"

namespace oceanscope {

Index TrackGraph::vertexIndex(Index t, std::int32_t label) const {
  const auto it = std::lower_bound(vertices.begin(), vertices.end(), std::pair{t, label},
                                   [](const TrackVertex& v, const std::pair<Index, std::int32_t>& key) {
                                     return std::pair{v.t, v.label} < key;
                                   });
  if (it == vertices.end() || it->t != t || it->label != label) return -1;
  return it - vertices.begin();
}

TrackGraph assembleTrackGraph(const std::vector<FrontLabels>& steps, Index firstStep, int n, WorkerPool* pool) {
  TrackGraph graph;
  graph.n = n;
  for (std::size_t s = 0; s < steps.size(); ++s) {
    for (const auto& f : steps[s].fronts) {
      graph.vertices.push_back({firstStep + static_cast<Index>(s), f.label, f.centroid,
                                static_cast<Index>(f.voxels.size()), f.depthMin, f.depthMax});
    }
  }
  const std::size_t pairs = steps.empty() ? 0 : steps.size() - 1;
  std::vector<std::vector<Arc>> perPair(pairs);
  auto body = [&](std::size_t s) {
    perPair[s] = correspondenceArcs(steps[s].labels, steps[s + 1].labels, n, firstStep + static_cast<Index>(s));
  };
  if (pool) {
    pool->parallelFor(pairs, body);
  } else {
    for (std::size_t s = 0; s < pairs; ++s) body(s);
  }
  for (auto& arcs : perPair) graph.arcs.insert(graph.arcs.end(), arcs.begin(), arcs.end());
  return graph;
}

TrackGraph buildTrackGraph(const Dataset& dataset, const IsovolumeSpec& spec, int n, TimeRange range,
                           WorkerPool& pool) {
  spec.validate();
  if (n < 1 || n % 2 == 0) fail(ErrorCode::invalidParameter, "front neighborhood n must be a positive odd integer");
  if (range.begin < 0 || range.end > dataset.timeSteps()) {
    fail(ErrorCode::bounds, "time range exceeds dataset steps");
  }
  if (range.size() < 2) fail(ErrorCode::invalidRange, "track graph needs at least 2 time steps");
  std::vector<FrontLabels> steps(static_cast<std::size_t>(range.size()));
  pool.parallelFor(steps.size(), [&](std::size_t s) {
    const Index t = range.begin + static_cast<Index>(s);
    steps[s] = extractFronts(dataset.loadTimeStep(t, spec.variable), spec, n, t);
  });
  // parallelFor returns only after every step finished: the barrier before arcs.
  return assembleTrackGraph(steps, range.begin, n, &pool);
}

std::vector<Track> longestTracks(const TrackGraph& graph, int k) {
  if (k <= 0) fail(ErrorCode::invalidParameter, "k must be positive");
  const std::size_t V = graph.vertices.size();
  std::vector<std::vector<Index>> successors(V);
  std::vector<int> inDegree(V, 0);
  for (const Arc& a : graph.arcs) {
    const Index from = graph.vertexIndex(a.fromT, a.fromLabel);
    const Index to = graph.vertexIndex(a.fromT + 1, a.toLabel);
    if (from < 0 || to < 0) fail(ErrorCode::invalidInput, "arc references a missing vertex");
    successors[static_cast<std::size_t>(from)].push_back(to);
    ++inDegree[static_cast<std::size_t>(to)];
  }
  // Longest path starting at each vertex; vertices are time-ordered so a
  // reverse sweep sees every successor first. Successors are ascending, so
  // the first best successor is the smallest one.
  std::vector<Index> bestLength(V, 1), next(V, -1);
  for (std::size_t r = V; r-- > 0;) {
    auto& succ = successors[r];
    std::sort(succ.begin(), succ.end());
    for (Index s : succ) {
      if (bestLength[static_cast<std::size_t>(s)] + 1 > bestLength[r]) {
        bestLength[r] = bestLength[static_cast<std::size_t>(s)] + 1;
        next[r] = s;
      }
    }
  }
  std::vector<Index> sources;
  for (std::size_t v = 0; v < V; ++v)
    if (inDegree[v] == 0) sources.push_back(static_cast<Index>(v));
  // Sources are already in (t, label) order, so a stable sort on length alone
  // applies the remaining tie-breaks.
  std::stable_sort(sources.begin(), sources.end(), [&](Index a, Index b) {
    return bestLength[static_cast<std::size_t>(a)] > bestLength[static_cast<std::size_t>(b)];
  });
  std::vector<Track> tracks;
  for (std::size_t s = 0; s < sources.size() && static_cast<int>(tracks.size()) < k; ++s) {
    Track track;
    for (Index v = sources[s]; v >= 0; v = next[static_cast<std::size_t>(v)]) track.vertices.push_back(v);
    tracks.push_back(std::move(track));
  }
  return tracks;
}

std::string trackGraphToJson(const TrackGraph& graph) {
  nlohmann::json vertices = nlohmann::json::array();
  for (const auto& v : graph.vertices) {
    vertices.push_back({{"t", v.t},
                        {"label", v.label},
                        {"centroid", {{"lat", v.centroid[0]}, {"lon", v.centroid[1]}, {"depth", v.centroid[2]}}},
                        {"voxelCount", v.voxelCount},
                        {"depthRange", {v.depthMin, v.depthMax}}});
  }
  nlohmann::json arcs = nlohmann::json::array();
  for (const auto& a : graph.arcs) arcs.push_back({{"fromT", a.fromT}, {"fromLabel", a.fromLabel}, {"toLabel", a.toLabel}});
  const nlohmann::json j = {{"n", graph.n}, {"vertices", std::move(vertices)}, {"arcs", std::move(arcs)}};
  return j.dump(2);
}

std::string tracksToGeoJson(const TrackGraph& graph, const std::vector<Track>& tracks) {
  std::vector<nlohmann::json> features;
  for (std::size_t k = 0; k < tracks.size(); ++k) {
    std::vector<geojson::Position> coords;
    nlohmann::json steps = nlohmann::json::array();
    nlohmann::json labels = nlohmann::json::array();
    for (Index v : tracks[k].vertices) {
      const auto& vertex = graph.vertices[static_cast<std::size_t>(v)];
      coords.push_back({vertex.centroid[1], vertex.centroid[0]});
      steps.push_back(vertex.t);
      labels.push_back(vertex.label);
    }
    features.push_back(geojson::lineString(
        coords, {{"track", k}, {"length", tracks[k].length()}, {"times", std::move(steps)}, {"labels", std::move(labels)}}));
  }
  return geojson::featureCollection(std::move(features)).dump(2);
}

}  // namespace oceanscope
