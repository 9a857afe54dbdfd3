#include "oceanscope/worker_pool.hpp"

#include <algorithm>

#include "oceanscope/error.hpp"

namespace oceanscope {

WorkerPool::WorkerPool(std::size_t workers) : workers_(workers) {
  if (workers_ < 1) fail(ErrorCode::invalidParameter, "worker count must be >= 1");
  if (workers_ > 1) {
    threads_.reserve(workers_);
    for (std::size_t k = 0; k < workers_; ++k) threads_.emplace_back([this] { workerLoop(); });
  }
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::parallelFor(std::size_t count, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  if (threads_.empty()) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::unique_lock lock(mutex_);
  body_ = &body;
  count_ = count;
  next_ = 0;
  finished_ = 0;
  failure_ = nullptr;
  failedIndex_ = count;
  ++generation_;
  wake_.notify_all();
  done_.wait(lock, [this] { return finished_ == count_ && active_ == 0; });
  body_ = nullptr;
  if (failure_) std::rethrow_exception(failure_);
}

void WorkerPool::workerLoop() {
  std::size_t seen = 0;
  std::unique_lock lock(mutex_);
  for (;;) {
    wake_.wait(lock, [&] { return stopping_ || (generation_ != seen && body_ != nullptr); });
    if (stopping_) return;
    seen = generation_;
    ++active_;
    while (next_ < count_) {
      const std::size_t index = next_++;
      const auto* body = body_;
      lock.unlock();
      std::exception_ptr error;
      try {
        (*body)(index);
      } catch (...) {
        error = std::current_exception();
      }
      lock.lock();
      if (error && index < failedIndex_) {
        failedIndex_ = index;
        failure_ = error;
      }
      ++finished_;
    }
    --active_;
    if (finished_ == count_ && active_ == 0) done_.notify_all();
  }
}

}  // namespace oceanscope
