#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace oceanscope {

enum class ErrorCode {
  invalidInput,
  invalidParameter,
  invalidRange,
  validation,
  outOfDomain,
  bounds,
  notFound,
  format,
  io,
  infeasible,
  degenerateWeights,
  invalidSeed,
  degenerateEddy,
  runtime,
};

std::string_view toString(ErrorCode code);

/// Process exit status for an error: 2 validation, 3 runtime, 4 I/O.
int exitCodeFor(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace oceanscope
