// oceanscope command-line front end: one subcommand per pipeline operation,
// `run` for whole JSON pipelines and `bench` for the scaling harness.

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "oceanscope/bench.hpp"
#include "oceanscope/error.hpp"
#include "oceanscope/pipeline.hpp"
#include "oceanscope/worker_pool.hpp"

using nlohmann::json;
using namespace oceanscope;

namespace {

std::vector<std::string> splitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

json scalarValue(const std::string& text, const std::string& type) {
  if (type == "string") return text;
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;  // type check reports it
  }
}

/// Parses an option value by the parameter's declared type. Arrays accept
/// JSON or a comma list; pairs of numbers stay numeric.
json parseValue(const std::string& text, const std::string& type) {
  if (type == "array" && !text.empty() && text.front() != '[') {
    json arr = json::array();
    for (const auto& item : splitList(text)) {
      json v = scalarValue(item, "number");
      arr.push_back(v.is_number() ? v : json(item));
    }
    return arr;
  }
  if (type == "object" || type == "array") {
    try {
      return json::parse(text);
    } catch (const json::exception& e) {
      fail(ErrorCode::validation, "expected JSON " + type + ": " + e.what());
    }
  }
  return scalarValue(text, type);
}

struct InputFlags {
  std::string path;
  std::string format;
  std::string variables;
  std::string bbox;
  std::optional<double> maxDepth;
  std::string clipTime;
};

struct OpCommand {
  std::string op;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> raw;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oceanscope: ocean feature extraction and Cinema database toolkit"};
  app.require_subcommand(1);

  std::size_t workers = 0;
  std::string configPath, outDir, logLevel = "info";
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--config", configPath, "JSON pipeline configuration");
  app.add_option("--out", outDir, "Output directory");
  app.add_option("--log-level", logLevel, "trace, debug, info, warn, error, off");

  InputFlags input;
  app.fallthrough();
  auto addInput = [&](CLI::App* sub) {
    sub->add_option("--input", input.path, "Dataset path (synthetic: fixture name)");
    sub->add_option("--format", input.format, "raw, netcdf or synthetic");
    sub->add_option("--variables", input.variables, "Comma-separated variables to load");
    sub->add_option("--bbox", input.bbox, "Clip box lonMin,lonMax,latMin,latMax");
    sub->add_option("--max-depth", input.maxDepth, "Clip depth (m)");
    sub->add_option("--clip-time", input.clipTime, "Clip time steps first,last");
  };

  addInput(&app);

  std::vector<OpCommand> ops;
  ops.reserve(pipelineOperations().size());
  for (const auto& op : pipelineOperations()) {
    OpCommand& cmd = ops.emplace_back();
    cmd.op = op;
    cmd.app = app.add_subcommand(op, "Run the " + op + " operation");
    for (const auto& p : operationParameters(op)) {
      const std::string flag = p.name.size() == 1 ? "-" + p.name : "--" + p.name;
      cmd.app->add_option(flag, cmd.raw[p.name], p.type);
    }
  }

  CLI::App* run = app.add_subcommand("run", "Run every step of --config");

  CLI::App* bench = app.add_subcommand("bench", "Scaling benchmark on synthetic data");
  std::string suite = "strongScaling", workerList, scaleList, csvPath;
  int repeats = 3;
  std::optional<double> memoryMiB;
  bench->add_option("--suite", suite, "weakScaling, strongScaling, resolutionScaling, ioLoad");
  bench->add_option("--workers-list", workerList, "Worker counts, e.g. 1,2,4,8");
  bench->add_option("--scales", scaleList, "Data scales, e.g. 1,4,16");
  bench->add_option("--repeats", repeats, "Repeats per point")->check(CLI::PositiveNumber);
  bench->add_option("--memory-limit-mib", memoryMiB, "Abort points estimated above this footprint");
  bench->add_option("--csv", csvPath, "CSV file (default: <out>/bench_<suite>.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    spdlog::set_level(spdlog::level::from_str(logLevel));

    if (bench->parsed()) {
      BenchParams params;
      params.repeats = repeats;
      if (!workerList.empty()) {
        params.workers.clear();
        for (const auto& w : splitList(workerList)) params.workers.push_back(std::stoul(w));
      }
      if (!scaleList.empty()) {
        params.scales.clear();
        for (const auto& s : splitList(scaleList)) params.scales.push_back(std::stod(s));
      }
      if (workers > 0) params.fixedWorkers = workers;
      if (memoryMiB) params.memoryLimitBytes = static_cast<std::uintmax_t>(*memoryMiB * 1024 * 1024);
      const BenchResult result = runBenchmark(parseBenchSuite(suite), params);
      const std::string csv = benchmarkCsv(result.records);
      std::cout << csv;
      const std::filesystem::path target =
          csvPath.empty() ? std::filesystem::path(outDir.empty() ? "out" : outDir) / ("bench_" + suite + ".csv") : std::filesystem::path(csvPath);
      if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
      std::ofstream(target) << csv;
      if (result.aborted) {
        std::cerr << "benchmark aborted: " << result.abortReason << "; largest completed scale: "
                  << (result.largestCompletedScale ? std::to_string(*result.largestCompletedScale) : "none") << '\n';
        return exitCodeFor(ErrorCode::infeasible);
      }
      return 0;
    }

    PipelineConfig config;
    if (!configPath.empty()) config = PipelineConfig::fromFile(configPath);
    if (!run->parsed()) config.steps.clear();
    if (!input.path.empty()) config.input.path = input.path;
    if (!input.format.empty()) config.input.format = input.format;
    if (!input.variables.empty()) config.input.variables = splitList(input.variables);
    if (!input.bbox.empty()) {
      const auto b = splitList(input.bbox);
      if (b.size() != 4) fail(ErrorCode::validation, "--bbox needs lonMin,lonMax,latMin,latMax");
      config.clip.lonMin = std::stod(b[0]);
      config.clip.lonMax = std::stod(b[1]);
      config.clip.latMin = std::stod(b[2]);
      config.clip.latMax = std::stod(b[3]);
    }
    if (input.maxDepth) config.clip.maxDepth = *input.maxDepth;
    if (!input.clipTime.empty()) {
      const auto r = splitList(input.clipTime);
      if (r.size() != 2) fail(ErrorCode::validation, "--clip-time needs first,last");
      config.clip.timeRange = TimeRange::inclusive(std::stol(r[0]), std::stol(r[1]));
    }
    config.clip.validate();
    if (workers > 0) config.workers = workers;
    if (!outDir.empty()) config.outDir = outDir;

    for (const auto& cmd : ops) {
      if (!cmd.app->parsed()) continue;
      PipelineStep step{cmd.op, json::object()};
      const auto types = operationParameters(cmd.op);
      for (const auto& p : types) {
        const std::string& text = cmd.raw.at(p.name);
        if (cmd.app->count(p.name.size() == 1 ? "-" + p.name : "--" + p.name) > 0) step.params[p.name] = parseValue(text, p.type);
      }
      config.steps = {step};
    }
    if (config.input.path.empty() && config.input.format != "synthetic") {
      fail(ErrorCode::validation, "no input: pass --input or a --config with an input section");
    }
    config.validate();

    WorkerPool pool(config.workers);
    const RunResult result = runPipeline(config, pool);
    if (!result.ok) std::cerr << "error: " << result.error << '\n';
    std::cout << (config.outDir / "manifest.json").string() << '\n';
    return result.exitCode();
  } catch (const Error& e) {
    std::cerr << "error (" << toString(e.code()) << "): " << e.what() << '\n';
    return exitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
