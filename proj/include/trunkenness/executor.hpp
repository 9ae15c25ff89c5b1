#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace trunk {

/// Fixed-size worker pool. parallel_for blocks until every index ran; the
/// calling thread takes part in the work. Nested calls from inside a worker
/// run inline, so library routines can parallelize without coordinating.
class Executor {
 public:
  explicit Executor(unsigned workers = std::thread::hardware_concurrency());
  ~Executor();
  Executor(const Executor&) = delete;
  Executor& operator=(const Executor&) = delete;

  unsigned size() const noexcept { return static_cast<unsigned>(threads_.size()) + 1; }

  void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

  /// Process-wide pool used when callers do not pass one explicitly.
  static Executor& shared();
  /// Rebuilds the shared pool with the given worker count (>= 1).
  static void configure_shared(unsigned workers);

 private:
  void worker_loop();
  void drain();

  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* body_ = nullptr;
  std::size_t next_ = 0;
  std::size_t count_ = 0;
  std::size_t finished_ = 0;
  std::size_t generation_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
  std::mutex submit_;
};

}  // namespace trunk
