#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace oceanscope {

/// N long-lived worker threads. parallelFor hands out indices dynamically and
/// blocks until every index ran; callers write results into per-index slots
/// so output order never depends on scheduling. With one worker the body runs
/// inline on the calling thread.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers = 1);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const { return workers_; }

  /// Runs body(0..count-1). Rethrows the exception of the lowest failing index.
  void parallelFor(std::size_t count, const std::function<void(std::size_t)>& body);

 private:
  void workerLoop();

  std::size_t workers_;
  std::vector<std::thread> threads_;

  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  bool stopping_ = false;
  std::size_t generation_ = 0;

  const std::function<void(std::size_t)>* body_ = nullptr;
  std::size_t count_ = 0;
  std::size_t next_ = 0;
  std::size_t finished_ = 0;
  std::size_t active_ = 0;
  std::size_t failedIndex_ = 0;
  std::exception_ptr failure_;
};

}  // namespace oceanscope
