#include "oceanscope/pipeline.hpp"

#include <zlib.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "oceanscope/cinema.hpp"
#include "oceanscope/eddy.hpp"
#include "oceanscope/flow.hpp"
#include "oceanscope/fronts.hpp"
#include "oceanscope/netcdf_reader.hpp"
#include "oceanscope/profile.hpp"
#include "oceanscope/raw_format.hpp"
#include "oceanscope/resample.hpp"
#include "oceanscope/synthetic.hpp"
#include "oceanscope/track_graph.hpp"
#include "oceanscope/worker_pool.hpp"

namespace oceanscope {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum class Type { number, integer, string, boolean, array, object };

std::string_view typeName(Type t) {
  switch (t) {
    case Type::number: return "number";
    case Type::integer: return "integer";
    case Type::string: return "string";
    case Type::boolean: return "boolean";
    case Type::array: return "array";
    case Type::object: return "object";
  }
  return "?";
}

bool hasType(const json& v, Type t) {
  switch (t) {
    case Type::number: return v.is_number();
    case Type::integer: return v.is_number_integer();
    case Type::string: return v.is_string();
    case Type::boolean: return v.is_boolean();
    case Type::array: return v.is_array();
    case Type::object: return v.is_object();
  }
  return false;
}

using Schema = std::map<std::string, Type>;

Schema merge(Schema a, const Schema& b) {
  a.insert(b.begin(), b.end());
  return a;
}

const Schema kSeedKeys{{"count", Type::integer},     {"strategy", Type::string}, {"weight", Type::string},
                       {"rngSeed", Type::integer},   {"region", Type::object},   {"t", Type::integer}};
const Schema kIntegrationKeys{{"stepSize", Type::number},  {"maxSteps", Type::integer},        {"direction", Type::string},
                              {"timeStep", Type::number},  {"terminationSpeed", Type::number}, {"metric", Type::string}};
const Schema kIsoKeys{{"variable", Type::string}, {"threshold", Type::number}, {"comparison", Type::string},
                      {"lo", Type::number},       {"hi", Type::number},        {"n", Type::integer},
                      {"timeRange", Type::array}};
const Schema kEddyKeys{{"timeRange", Type::array},      {"closureFraction", Type::number}, {"persistenceThreshold", Type::number},
                       {"rMax", Type::number},          {"n", Type::integer},              {"metric", Type::string},
                       {"stepFraction", Type::number},  {"loopsBudget", Type::number}};

const std::map<std::string, Schema>& schemas() {
  static const std::map<std::string, Schema> table{
      {"ingest", {{"dir", Type::string}}},
      {"resample",
       {{"depthStep", Type::number}, {"maxDepth", Type::number}, {"horizontalFactor", Type::integer},
        {"fields", Type::array}, {"dir", Type::string}}},
      {"derive", {{"field", Type::string}, {"name", Type::string}, {"metric", Type::string}, {"dir", Type::string}}},
      {"seeds", merge(kSeedKeys, {{"metric", Type::string}, {"file", Type::string}})},
      {"streamlines", merge(merge(kSeedKeys, kIntegrationKeys), {{"file", Type::string}})},
      {"pathlines", merge(merge(kSeedKeys, kIntegrationKeys), {{"timeRange", Type::array}, {"file", Type::string}})},
      {"fronts", merge(kIsoKeys, {{"file", Type::string}})},
      {"track", merge(kIsoKeys, {{"k", Type::integer}, {"file", Type::string}, {"geojson", Type::string}})},
      {"eddies", merge(kEddyKeys, {{"file", Type::string}, {"geojson", Type::string}})},
      {"profile",
       {{"lon", Type::number}, {"lat", Type::number}, {"fields", Type::array}, {"timeRange", Type::array},
        {"intervals", Type::array}, {"metric", Type::string}, {"file", Type::string}, {"csv", Type::string}}},
      {"cinema",
       {{"fields", Type::array}, {"timeRange", Type::array}, {"orientation", Type::string}, {"dir", Type::string},
        {"metric", Type::string}}},
      {"viewer-export",
       {{"fields", Type::array}, {"timeRange", Type::array}, {"orientation", Type::string}, {"dir", Type::string},
        {"metric", Type::string}, {"track", Type::object}, {"eddies", Type::object}, {"profiles", Type::array}}},
  };
  return table;
}

void checkParams(const std::string& where, const json& params, const Schema& schema) {
  if (!params.is_object()) fail(ErrorCode::validation, where + ": params must be an object");
  for (const auto& [key, value] : params.items()) {
    const auto it = schema.find(key);
    if (it == schema.end()) fail(ErrorCode::validation, where + ": unknown parameter '" + key + "'");
    if (!hasType(value, it->second)) {
      fail(ErrorCode::validation,
           where + ": parameter '" + key + "' must be " + std::string(typeName(it->second)));
    }
  }
}

template <typename T>
T param(const json& params, const char* key, T fallback) {
  return params.contains(key) ? params.at(key).get<T>() : fallback;
}

Metric metricParam(const json& p) {
  const auto m = param<std::string>(p, "metric", "spherical");
  if (m == "spherical") return Metric::spherical;
  if (m == "cartesian") return Metric::cartesian;
  fail(ErrorCode::invalidParameter, "metric must be spherical or cartesian");
}

TimeRange rangeParam(const json& p, const Dataset& ds, const char* key = "timeRange") {
  if (!p.contains(key)) return ds.allSteps();
  const auto r = p.at(key).get<std::vector<Index>>();
  if (r.size() != 2) fail(ErrorCode::invalidParameter, std::string(key) + " must be [first, last]");
  if (r[0] < 0 || r[1] >= ds.timeSteps() || r[1] < r[0] - 1) {
    fail(ErrorCode::bounds, std::string(key) + " outside [0, " + std::to_string(ds.timeSteps() - 1) + "]");
  }
  return TimeRange::inclusive(r[0], r[1]);
}

IsovolumeSpec isoParam(const json& p) {
  IsovolumeSpec spec;
  spec.variable = param<std::string>(p, "variable", spec.variable);
  spec.threshold = param<double>(p, "threshold", spec.threshold);
  const auto cmp = param<std::string>(p, "comparison", "geq");
  if (cmp == "geq") {
    spec.comparison = Comparison::geq;
  } else if (cmp == "leq") {
    spec.comparison = Comparison::leq;
  } else if (cmp == "interval") {
    spec.comparison = Comparison::interval;
  } else {
    fail(ErrorCode::invalidParameter, "comparison must be geq, leq or interval");
  }
  spec.lo = param<double>(p, "lo", 0.0);
  spec.hi = param<double>(p, "hi", 0.0);
  spec.validate();
  return spec;
}

SeedSpec seedParam(const json& p) {
  SeedSpec spec;
  spec.count = param<Index>(p, "count", spec.count);
  const auto strategy = param<std::string>(p, "strategy", "uniform");
  if (strategy == "uniform") {
    spec.strategy = SeedSpec::Strategy::uniform;
  } else if (strategy == "weighted") {
    spec.strategy = SeedSpec::Strategy::weighted;
  } else {
    fail(ErrorCode::invalidParameter, "seed strategy must be uniform or weighted");
  }
  spec.weight = DerivedFieldKind::parse(param<std::string>(p, "weight", "speed"));
  spec.rngSeed = param<std::uint64_t>(p, "rngSeed", 0);
  if (p.contains("region")) {
    const json& r = p.at("region");
    SeedRegion region;
    region.lonMin = r.value("lonMin", region.lonMin);
    region.lonMax = r.value("lonMax", region.lonMax);
    region.latMin = r.value("latMin", region.latMin);
    region.latMax = r.value("latMax", region.latMax);
    region.depthMin = r.value("depthMin", region.depthMin);
    if (r.contains("depthMax")) region.depthMax = r.at("depthMax").get<double>();
    spec.region = region;
  }
  return spec;
}

IntegrationParams integrationParam(const json& p) {
  IntegrationParams ip;
  ip.stepSize = param<double>(p, "stepSize", ip.stepSize);
  ip.maxSteps = param<Index>(p, "maxSteps", ip.maxSteps);
  ip.direction = parseDirection(param<std::string>(p, "direction", "forward"));
  ip.timeStep = param<double>(p, "timeStep", ip.timeStep);
  ip.terminationSpeed = param<double>(p, "terminationSpeed", ip.terminationSpeed);
  ip.metric = metricParam(p);
  ip.validate();
  return ip;
}

EddyParams eddyParam(const json& p) {
  EddyParams ep;
  ep.closureFraction = param<double>(p, "closureFraction", ep.closureFraction);
  if (p.contains("persistenceThreshold")) ep.persistenceThreshold = p.at("persistenceThreshold").get<double>();
  if (p.contains("rMax")) ep.rMax = p.at("rMax").get<double>();
  ep.n = param<int>(p, "n", ep.n);
  ep.stepFraction = param<double>(p, "stepFraction", ep.stepFraction);
  ep.loopsBudget = param<double>(p, "loopsBudget", ep.loopsBudget);
  ep.metric = metricParam(p);
  ep.validate();
  return ep;
}

std::vector<std::string> fieldsParam(const json& p, const Dataset& ds) {
  if (p.contains("fields")) return p.at("fields").get<std::vector<std::string>>();
  return ds.variables();
}

SliceOrientation orientationParam(const json& p) {
  const auto o = param<std::string>(p, "orientation", "depth");
  if (o == "depth") return SliceOrientation::depth;
  if (o == "vertical") return SliceOrientation::vertical;
  fail(ErrorCode::invalidParameter, "orientation must be depth or vertical");
}

std::vector<DepthInterval> intervalsParam(const json& p) {
  std::vector<DepthInterval> out;
  if (!p.contains("intervals")) return out;
  for (const auto& iv : p.at("intervals")) {
    const auto pair = iv.get<std::vector<double>>();
    if (pair.size() != 2) fail(ErrorCode::invalidParameter, "depth interval must be [lo, hi]");
    out.push_back({pair[0], pair[1]});
  }
  return out;
}

/// Mutable state threaded through the steps.
struct RunState {
  Dataset dataset;
  std::optional<std::vector<GeoPoint>> seeds;
  fs::path outDir;
  std::size_t step = 0;
  std::vector<Artifact> artifacts;

  void record(const fs::path& absolute) {
    if (fs::is_directory(absolute)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::recursive_directory_iterator(absolute))
        if (e.is_regular_file()) files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) record(f);
      return;
    }
    artifacts.push_back({fs::relative(absolute, outDir).generic_string(), fs::file_size(absolute), fileCrc32(absolute), step});
  }

  fs::path writeText(const std::string& name, const std::string& text) {
    const fs::path path = outDir / name;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) fail(ErrorCode::io, "cannot write " + path.string());
    out.close();
    record(path);
    return path;
  }
};

std::vector<GeoPoint> seedsFor(RunState& s, const json& p, Index t, Metric metric) {
  if (s.seeds && !p.contains("count")) return *s.seeds;
  const SeedSpec spec = seedParam(p);
  if (spec.strategy == SeedSpec::Strategy::uniform) {
    const std::string var = s.dataset.hasVariable("u") ? "u" : s.dataset.variables().front();
    return placeSeeds(s.dataset.loadTimeStep(t, var), spec);
  }
  if (spec.weight.kind == DerivedFieldKind::Kind::userScalar) return placeSeeds(s.dataset.loadTimeStep(t, spec.weight.name), spec);
  return placeSeeds(s.dataset.loadVelocity(t), spec, metric);
}

Index stepParam(const json& p, const Dataset& ds) {
  const Index t = param<Index>(p, "t", 0);
  if (t < 0 || t >= ds.timeSteps()) fail(ErrorCode::bounds, "time step " + std::to_string(t) + " out of range");
  return t;
}

json frontsJson(const FrontLabels& labels) {
  json list = json::array();
  for (const auto& f : labels.fronts) {
    list.push_back({{"t", f.timeStep},
                    {"label", f.label},
                    {"voxelCount", f.voxels.size()},
                    {"depthRange", {f.depthMin, f.depthMax}},
                    {"centroid", {{"lat", f.centroid[0]}, {"lon", f.centroid[1]}, {"depth", f.centroid[2]}}}});
  }
  return list;
}

std::string eddyListJson(const std::vector<std::pair<Index, std::vector<EddyDescriptor>>>& perStep) {
  json steps = json::array();
  for (const auto& [t, eddies] : perStep) {
    json e = json::parse(eddiesToJson(eddies));
    steps.push_back({{"t", t}, {"eddies", e.at("eddies")}});
  }
  return json{{"steps", std::move(steps)}}.dump(2);
}

std::vector<std::pair<Index, std::vector<EddyDescriptor>>> eddiesOverRange(const Dataset& ds, TimeRange range,
                                                                           const EddyParams& ep, WorkerPool& pool) {
  std::vector<std::pair<Index, std::vector<EddyDescriptor>>> out;
  for (Index t = range.begin; t < range.end; ++t) out.emplace_back(t, detectEddies(ds.loadVelocity(t), ep, &pool));
  return out;
}

std::string eddyBundleGeoJson(const std::vector<std::pair<Index, std::vector<EddyDescriptor>>>& perStep, Metric metric) {
  std::vector<json> features;
  for (const auto& [t, eddies] : perStep) {
    json fc = json::parse(eddiesToGeoJson(eddies, metric));
    for (auto& f : fc.at("features")) {
      f["properties"]["t"] = t;
      features.push_back(std::move(f));
    }
  }
  return json{{"type", "FeatureCollection"}, {"features", std::move(features)}}.dump();
}

Dataset resampledDataset(const Dataset& ds, const ResampleSpec& spec, const std::vector<std::string>& vars,
                         WorkerPool& pool) {
  const SpatialGridPtr target = regularTargetGrid(*ds.spatialGrid(), spec);
  std::map<std::string, std::vector<ScalarVolume>> out;
  for (const auto& v : vars) {
    std::vector<ScalarVolume> steps(static_cast<std::size_t>(ds.timeSteps()));
    pool.parallelFor(steps.size(), [&](std::size_t t) {
      steps[t] = resampleOnto(ds.loadTimeStep(static_cast<Index>(t), v), target);
    });
    out.emplace(v, std::move(steps));
  }
  return Dataset::fromVolumes(ds.grid().time, target, std::move(out));
}

void runStep(RunState& s, const PipelineStep& step, WorkerPool& pool) {
  const json& p = step.params;
  const std::string& op = step.op;
  if (op == "ingest") {
    s.record(writeRaw(s.dataset, s.outDir / param<std::string>(p, "dir", "dataset")).parent_path());
  } else if (op == "resample") {
    ResampleSpec spec;
    spec.depthStep = param<double>(p, "depthStep", spec.depthStep);
    spec.maxDepth = param<double>(p, "maxDepth", spec.maxDepth);
    spec.horizontalFactor = param<int>(p, "horizontalFactor", spec.horizontalFactor);
    spec.validate();
    const auto vars = fieldsParam(p, s.dataset);
    s.dataset = resampledDataset(s.dataset, spec, vars, pool);
    s.record(writeRaw(s.dataset, s.outDir / param<std::string>(p, "dir", "resampled")).parent_path());
  } else if (op == "derive") {
    const auto kind = DerivedFieldKind::parse(param<std::string>(p, "field", "speed"));
    const std::string name = param<std::string>(p, "name", kind.label());
    const Metric metric = metricParam(p);
    std::vector<ScalarVolume> steps(static_cast<std::size_t>(s.dataset.timeSteps()));
    pool.parallelFor(steps.size(), [&](std::size_t t) {
      steps[t] = deriveFromDataset(s.dataset, static_cast<Index>(t), kind, {}, metric);
    });
    std::map<std::string, std::vector<ScalarVolume>> only{{name, steps}};
    const Dataset derived = Dataset::fromVolumes(s.dataset.grid().time, s.dataset.spatialGrid(), std::move(only));
    s.dataset = s.dataset.withVariable(name, std::move(steps));
    s.record(writeRaw(derived, s.outDir / param<std::string>(p, "dir", "derived")).parent_path());
  } else if (op == "seeds") {
    const Index t = stepParam(p, s.dataset);
    s.seeds.reset();
    s.seeds = seedsFor(s, p, t, metricParam(p));
    json list = json::array();
    for (const auto& q : *s.seeds) list.push_back({q[0], q[1], q[2]});
    s.writeText(param<std::string>(p, "file", "seeds.json"), json{{"seeds", std::move(list)}}.dump(2));
  } else if (op == "streamlines") {
    const Index t = stepParam(p, s.dataset);
    const IntegrationParams ip = integrationParam(p);
    const auto seeds = seedsFor(s, p, t, ip.metric);
    const auto lines = streamlines(s.dataset.loadVelocity(t), seeds, ip, &pool);
    s.writeText(param<std::string>(p, "file", "streamlines.geojson"), polylinesToGeoJson(lines, ip.metric));
  } else if (op == "pathlines") {
    const TimeRange range = rangeParam(p, s.dataset);
    const IntegrationParams ip = integrationParam(p);
    const auto seeds = seedsFor(s, p, range.begin, ip.metric);
    const auto start = std::chrono::steady_clock::now();
    const auto lines = pathlines(s.dataset, seeds, ip, range, &pool);
    spdlog::info("pathlines: {} seeds over {} steps in {:.3f} s", seeds.size(), range.size(),
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    s.writeText(param<std::string>(p, "file", "pathlines.geojson"), polylinesToGeoJson(lines, ip.metric));
  } else if (op == "fronts") {
    const IsovolumeSpec spec = isoParam(p);
    const int n = param<int>(p, "n", 3);
    const TimeRange range = rangeParam(p, s.dataset);
    std::vector<FrontLabels> labels(static_cast<std::size_t>(range.size()));
    pool.parallelFor(labels.size(), [&](std::size_t k) {
      const Index t = range.begin + static_cast<Index>(k);
      labels[k] = extractFronts(s.dataset.loadTimeStep(t, spec.variable), spec, n, t);
    });
    json steps = json::array();
    for (const auto& l : labels) steps.push_back(frontsJson(l));
    s.writeText(param<std::string>(p, "file", "fronts.json"), json{{"n", n}, {"steps", std::move(steps)}}.dump(2));
  } else if (op == "track") {
    const IsovolumeSpec spec = isoParam(p);
    const int n = param<int>(p, "n", 3);
    const TrackGraph graph = buildTrackGraph(s.dataset, spec, n, rangeParam(p, s.dataset), pool);
    s.writeText(param<std::string>(p, "file", "track_graph.json"), trackGraphToJson(graph));
    const auto tracks = longestTracks(graph, param<int>(p, "k", 5));
    s.writeText(param<std::string>(p, "geojson", "tracks.geojson"), tracksToGeoJson(graph, tracks));
  } else if (op == "eddies") {
    const EddyParams ep = eddyParam(p);
    const auto perStep = eddiesOverRange(s.dataset, rangeParam(p, s.dataset), ep, pool);
    s.writeText(param<std::string>(p, "file", "eddies.json"), eddyListJson(perStep));
    s.writeText(param<std::string>(p, "geojson", "eddies.geojson"), eddyBundleGeoJson(perStep, ep.metric));
  } else if (op == "profile") {
    if (!p.contains("lon") || !p.contains("lat")) fail(ErrorCode::invalidParameter, "profile needs lon and lat");
    DepthProfile profile = sampleNeedle(s.dataset, p.at("lon").get<double>(), p.at("lat").get<double>(),
                                        fieldsParam(p, s.dataset), rangeParam(p, s.dataset), {}, metricParam(p));
    if (p.contains("intervals")) profile = selectDepthInterval(profile, intervalsParam(p));
    s.writeText(param<std::string>(p, "csv", "profile.csv"), profileToCsv(profile));
    s.writeText(param<std::string>(p, "file", "profile.json"), profileToJson(profile));
  } else if (op == "cinema") {
    CinemaOptions options;
    options.orientation = orientationParam(p);
    options.metric = metricParam(p);
    const fs::path dir = s.outDir / param<std::string>(p, "dir", "cinema");
    const CinemaIndex index = generateDatabase(s.dataset, fieldsParam(p, s.dataset), rangeParam(p, s.dataset), dir, pool, options);
    s.record(dir);
    s.writeText(param<std::string>(p, "dir", "cinema") + "_compression.json",
                compressionToJson(compressionReport(s.dataset, index)));
  } else if (op == "viewer-export") {
    const std::string dirName = param<std::string>(p, "dir", "viewer");
    const fs::path dir = s.outDir / dirName;
    CinemaOptions options;
    options.orientation = orientationParam(p);
    options.metric = metricParam(p);
    const TimeRange range = rangeParam(p, s.dataset);
    generateDatabase(s.dataset, fieldsParam(p, s.dataset), range, dir, pool, options);
    s.record(dir);

    const json trackParams = p.value("track", json::object());
    checkParams("viewer-export.track", trackParams, merge(kIsoKeys, {{"k", Type::integer}}));
    if (s.dataset.hasVariable(isoParam(trackParams).variable) && range.size() >= 2) {
      const TrackGraph graph =
          buildTrackGraph(s.dataset, isoParam(trackParams), param<int>(trackParams, "n", 3), range, pool);
      s.writeText(dirName + "/tracks.geojson", tracksToGeoJson(graph, longestTracks(graph, param<int>(trackParams, "k", 5))));
    } else {
      s.writeText(dirName + "/tracks.geojson", json{{"type", "FeatureCollection"}, {"features", json::array()}}.dump());
    }

    const json eddyParams = p.value("eddies", json::object());
    checkParams("viewer-export.eddies", eddyParams, kEddyKeys);
    if (s.dataset.hasVariable("u") && s.dataset.hasVariable("v")) {
      const EddyParams ep = eddyParam(eddyParams);
      s.writeText(dirName + "/eddies.geojson", eddyBundleGeoJson(eddiesOverRange(s.dataset, range, ep, pool), ep.metric));
    } else {
      s.writeText(dirName + "/eddies.geojson", json{{"type", "FeatureCollection"}, {"features", json::array()}}.dump());
    }

    std::vector<DepthProfile> profiles;
    for (const auto& probe : p.value("profiles", json::array())) {
      checkParams("viewer-export.profiles", probe, {{"lon", Type::number}, {"lat", Type::number}, {"fields", Type::array}});
      profiles.push_back(sampleNeedle(s.dataset, probe.at("lon").get<double>(), probe.at("lat").get<double>(),
                                      fieldsParam(probe, s.dataset), range, {}, options.metric));
    }
    s.writeText(dirName + "/profiles.json", profilesToJson(profiles));
  } else {
    fail(ErrorCode::validation, "unknown operation '" + op + "'");
  }
}

void writeManifest(const fs::path& outDir, const PipelineConfig& config, const RunResult& result) {
  json artifacts = json::array();
  for (const auto& a : result.artifacts) {
    artifacts.push_back({{"path", a.path}, {"bytes", a.bytes}, {"crc32", fmt::format("{:08x}", a.crc32)}, {"step", a.step}});
  }
  json steps = json::array();
  for (std::size_t k = 0; k < config.steps.size(); ++k) {
    std::string status = "done";
    if (result.failedStep) status = k < *result.failedStep ? "done" : (k == *result.failedStep ? "failed" : "skipped");
    steps.push_back({{"index", k}, {"op", config.steps[k].op}, {"status", status}});
  }
  json manifest = {{"status", result.ok ? "ok" : "failed"}, {"steps", std::move(steps)}, {"artifacts", std::move(artifacts)}};
  if (!result.ok) {
    manifest["failure"] = {{"step", result.failedStep ? json(*result.failedStep) : json(nullptr)},
                           {"code", toString(result.errorCode.value_or(ErrorCode::runtime))},
                           {"message", result.error}};
  }
  std::ofstream out(outDir / "manifest.json", std::ios::binary | std::ios::trunc);
  out << manifest.dump(2) << '\n';
}

}  // namespace

const std::vector<std::string>& pipelineOperations() {
  static const std::vector<std::string> ops = [] {
    std::vector<std::string> names;
    for (const auto& [name, schema] : schemas()) names.push_back(name);
    return names;
  }();
  return ops;
}

std::vector<ParameterInfo> operationParameters(std::string_view op) {
  const auto it = schemas().find(std::string(op));
  if (it == schemas().end()) fail(ErrorCode::validation, "unknown operation '" + std::string(op) + "'");
  std::vector<ParameterInfo> out;
  for (const auto& [name, type] : it->second) out.push_back({name, std::string(typeName(type))});
  return out;
}

ClipSpec clipFromJson(const json& j) {
  checkParams("clip", j,
              {{"lonMin", Type::number}, {"lonMax", Type::number}, {"latMin", Type::number}, {"latMax", Type::number},
               {"maxDepth", Type::number}, {"timeRange", Type::array}});
  ClipSpec clip;
  clip.lonMin = j.value("lonMin", clip.lonMin);
  clip.lonMax = j.value("lonMax", clip.lonMax);
  clip.latMin = j.value("latMin", clip.latMin);
  clip.latMax = j.value("latMax", clip.latMax);
  clip.maxDepth = j.value("maxDepth", clip.maxDepth);
  if (j.contains("timeRange")) {
    const auto r = j.at("timeRange").get<std::vector<Index>>();
    if (r.size() != 2) fail(ErrorCode::validation, "clip.timeRange must be [first, last]");
    clip.timeRange = TimeRange::inclusive(r[0], r[1]);
  }
  clip.validate();
  return clip;
}

PipelineConfig PipelineConfig::fromJson(const json& j) {
  try {
    checkParams("config", j,
                {{"input", Type::object}, {"clip", Type::object}, {"steps", Type::array}, {"workers", Type::integer},
                 {"outDir", Type::string}});
    PipelineConfig config;
    if (!j.contains("input")) fail(ErrorCode::validation, "config: missing input");
    const json& in = j.at("input");
    checkParams("input", in,
                {{"path", Type::string}, {"format", Type::string}, {"variables", Type::array}, {"fixture", Type::object}});
    config.input.path = in.value("path", "");
    config.input.format = in.value("format", "raw");
    config.input.variables = in.value("variables", std::vector<std::string>{});
    config.input.fixture = in.value("fixture", json::object());
    if (j.contains("clip")) config.clip = clipFromJson(j.at("clip"));
    const auto workers = j.value("workers", 1);
    if (workers < 1) fail(ErrorCode::validation, "config: workers must be >= 1");
    config.workers = static_cast<std::size_t>(workers);
    config.outDir = j.value("outDir", std::string("out"));
    for (const auto& s : j.value("steps", json::array())) {
      if (!s.is_object() || !s.contains("op") || !s.at("op").is_string()) {
        fail(ErrorCode::validation, "config: every step needs an op name");
      }
      checkParams("step", s, {{"op", Type::string}, {"params", Type::object}});
      config.steps.push_back({s.at("op").get<std::string>(), s.value("params", json::object())});
    }
    config.validate();
    return config;
  } catch (const json::exception& e) {
    fail(ErrorCode::validation, std::string("config: ") + e.what());
  }
}

PipelineConfig PipelineConfig::fromFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot read config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::validation, "config " + path.string() + ": " + e.what());
  }
  return fromJson(j);
}

void PipelineConfig::validate() const {
  static const std::set<std::string> formats{"raw", "netcdf", "synthetic"};
  if (!formats.count(input.format)) fail(ErrorCode::validation, "input.format must be raw, netcdf or synthetic");
  if (workers < 1) fail(ErrorCode::validation, "workers must be >= 1");
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto it = schemas().find(steps[k].op);
    const std::string where = "step " + std::to_string(k) + " (" + steps[k].op + ")";
    if (it == schemas().end()) fail(ErrorCode::validation, where + ": unknown operation");
    checkParams(where, steps[k].params, it->second);
  }
}

Dataset openInput(const InputSpec& input, const ClipSpec& clip) {
  if (input.format == "raw") return ingestRaw(input.path, input.variables, clip);
  if (input.format == "netcdf") return ingestNetCDF(input.path, input.variables, clip);
  if (input.format == "synthetic") {
    Dataset ds = [&] {
      const std::string name = input.path.string();
      if (name == "filament") return synthetic::filamentFixture();
      if (name.empty() || name == "standard") {
        synthetic::FixtureSpec spec;
        const json& f = input.fixture;
        checkParams("input.fixture", f,
                    {{"depths", Type::integer}, {"lats", Type::integer}, {"lons", Type::integer}, {"steps", Type::integer},
                     {"landCorner", Type::boolean}});
        spec.depths = f.value("depths", spec.depths);
        spec.lats = f.value("lats", spec.lats);
        spec.lons = f.value("lons", spec.lons);
        spec.steps = f.value("steps", spec.steps);
        spec.landCorner = f.value("landCorner", spec.landCorner);
        return synthetic::translatingBlobFixture(spec);
      }
      fail(ErrorCode::notFound, "unknown synthetic fixture '" + name + "'");
    }();
    return ds.subset(input.variables, clip);
  }
  fail(ErrorCode::validation, "unknown input format '" + input.format + "'");
}

std::uint32_t fileCrc32(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot read " + path.string());
  uLong crc = crc32(0L, Z_NULL, 0);
  std::vector<char> buffer(1 << 16);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    const auto got = in.gcount();
    if (got > 0) crc = crc32(crc, reinterpret_cast<const Bytef*>(buffer.data()), static_cast<uInt>(got));
  }
  return static_cast<std::uint32_t>(crc);
}

RunResult runPipeline(const PipelineConfig& config, const Dataset& dataset, WorkerPool& pool) {
  config.validate();
  std::error_code ec;
  fs::create_directories(config.outDir, ec);
  if (ec) fail(ErrorCode::io, "cannot create " + config.outDir.string() + ": " + ec.message());
  RunState state{dataset, std::nullopt, config.outDir, 0, {}};
  RunResult result;
  for (std::size_t k = 0; k < config.steps.size(); ++k) {
    state.step = k;
    const auto start = std::chrono::steady_clock::now();
    try {
      runStep(state, config.steps[k], pool);
    } catch (const Error& e) {
      result.ok = false;
      result.failedStep = k;
      result.errorCode = e.code();
      result.error = e.what();
    } catch (const std::exception& e) {
      result.ok = false;
      result.failedStep = k;
      result.errorCode = ErrorCode::runtime;
      result.error = e.what();
    }
    if (!result.ok) {
      spdlog::error("step {} ({}) failed: {}", k, config.steps[k].op, result.error);
      break;
    }
    spdlog::info("step {} ({}) done in {:.3f} s", k, config.steps[k].op,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  result.artifacts = std::move(state.artifacts);
  writeManifest(config.outDir, config, result);
  return result;
}

RunResult runPipeline(const PipelineConfig& config, WorkerPool& pool) {
  config.validate();
  return runPipeline(config, openInput(config.input, config.clip), pool);
}

}  // namespace oceanscope
