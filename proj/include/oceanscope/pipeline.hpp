#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oceanscope/dataset.hpp"

namespace oceanscope {

class WorkerPool;

/// Where the data comes from. format: raw, netcdf or synthetic; for
/// synthetic the path names the fixture (standard, filament).
struct InputSpec {
  std::filesystem::path path;
  std::string format = "raw";
  std::vector<std::string> variables;
  nlohmann::json fixture = nlohmann::json::object();  // synthetic FixtureSpec overrides
};

struct PipelineStep {
  std::string op;
  nlohmann::json params = nlohmann::json::object();
};

struct PipelineConfig {
  InputSpec input;
  ClipSpec clip;
  std::vector<PipelineStep> steps;
  std::size_t workers = 1;
  std::filesystem::path outDir = "out";

  static PipelineConfig fromJson(const nlohmann::json& j);
  static PipelineConfig fromFile(const std::filesystem::path& path);

  /// Known operations, parameter names and types; throws validation errors.
  void validate() const;
};

/// Names of every pipeline operation.
const std::vector<std::string>& pipelineOperations();

struct ParameterInfo {
  std::string name;
  std::string type;  // number, integer, string, boolean, array, object
};

/// Accepted parameters of one operation; unknown operations raise validation.
std::vector<ParameterInfo> operationParameters(std::string_view op);

struct Artifact {
  std::string path;  // relative to outDir
  std::uintmax_t bytes = 0;
  std::uint32_t crc32 = 0;
  std::size_t step = 0;
};

struct RunResult {
  bool ok = true;
  std::optional<std::size_t> failedStep;
  std::optional<ErrorCode> errorCode;
  std::string error;
  std::vector<Artifact> artifacts;

  int exitCode() const { return ok ? 0 : exitCodeFor(errorCode.value_or(ErrorCode::runtime)); }
};

Dataset openInput(const InputSpec& input, const ClipSpec& clip);

/// Runs the steps in order on `pool`. Every artifact goes under outDir and
/// is listed, with its CRC-32, in outDir/manifest.json; on failure the
/// manifest records the failing step and earlier artifacts are kept.
RunResult runPipeline(const PipelineConfig& config, WorkerPool& pool);

/// Same, on an already opened dataset (input is ignored).
RunResult runPipeline(const PipelineConfig& config, const Dataset& dataset, WorkerPool& pool);

std::uint32_t fileCrc32(const std::filesystem::path& path);

ClipSpec clipFromJson(const nlohmann::json& j);

}  // namespace oceanscope
