#pragma once

#include <doctest.h>

#include <filesystem>
#include <optional>
#include <random>
#include <string>

#include "oceanscope/error.hpp"

namespace testing {

/// Error code raised by `f`, or nothing when it returns normally.
template <typename F>
std::optional<oceanscope::ErrorCode> errorOf(F&& f) {
  try {
    f();
  } catch (const oceanscope::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

/// True when `f` raises an oceanscope::Error with `code`.
template <typename F>
bool raises(F&& f, oceanscope::ErrorCode code) {
  const auto raised = errorOf(std::forward<F>(f));
  return raised && *raised == code;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("oceanscope_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
