#include "oceanscope/error.hpp"

namespace oceanscope {

std::string_view toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalidInput: return "invalid-input";
    case ErrorCode::invalidParameter: return "invalid-parameter";
    case ErrorCode::invalidRange: return "invalid-range";
    case ErrorCode::validation: return "validation";
    case ErrorCode::outOfDomain: return "out-of-domain";
    case ErrorCode::bounds: return "bounds";
    case ErrorCode::notFound: return "not-found";
    case ErrorCode::format: return "format";
    case ErrorCode::io: return "io";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::degenerateWeights: return "degenerate-weights";
    case ErrorCode::invalidSeed: return "invalid-seed";
    case ErrorCode::degenerateEddy: return "degenerate-eddy";
    case ErrorCode::runtime: return "runtime";
  }
  return "unknown";
}

int exitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalidInput:
    case ErrorCode::invalidParameter:
    case ErrorCode::invalidRange:
    case ErrorCode::validation:
    case ErrorCode::outOfDomain:
    case ErrorCode::bounds:
      return 2;
    case ErrorCode::notFound:
    case ErrorCode::format:
    case ErrorCode::io:
      return 4;
    default:
      return 3;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(toString(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace oceanscope
