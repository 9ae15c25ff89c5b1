#include "trunkenness/executor.hpp"

#include <algorithm>
#include <memory>
#include <utility>

namespace trunk {

namespace {

thread_local bool t_inside_pool = false;

std::mutex g_shared_mutex;
std::unique_ptr<Executor> g_shared;

}  // namespace

Executor::Executor(unsigned workers) {
  workers = std::max(1u, workers);
  threads_.reserve(workers - 1);
  for (unsigned i = 0; i + 1 < workers; ++i) {
    threads_.emplace_back([this] { worker_loop(); });
  }
}

Executor::~Executor() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

void Executor::drain() {
  for (;;) {
    std::size_t index;
    const std::function<void(std::size_t)>* body;
    {
      std::lock_guard lock(mutex_);
      if (body_ == nullptr || next_ >= count_) return;
      index = next_++;
      body = body_;
    }
    try {
      (*body)(index);
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
    {
      std::lock_guard lock(mutex_);
      ++finished_;
      if (finished_ == count_) done_.notify_all();
    }
  }
}

void Executor::worker_loop() {
  t_inside_pool = true;
  std::size_t seen = 0;
  for (;;) {
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
    }
    drain();
  }
}

void Executor::parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  if (threads_.empty() || t_inside_pool || count == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::lock_guard submit(submit_);
  {
    std::lock_guard lock(mutex_);
    body_ = &body;
    next_ = 0;
    count_ = count;
    finished_ = 0;
    ++generation_;
  }
  wake_.notify_all();
  t_inside_pool = true;
  drain();
  t_inside_pool = false;
  std::unique_lock lock(mutex_);
  done_.wait(lock, [&] { return finished_ == count_; });
  body_ = nullptr;
  if (error_) {
    auto error = std::exchange(error_, nullptr);
    std::rethrow_exception(error);
  }
}

Executor& Executor::shared() {
  std::lock_guard lock(g_shared_mutex);
  if (!g_shared) g_shared = std::make_unique<Executor>();
  return *g_shared;
}

void Executor::configure_shared(unsigned workers) {
  std::lock_guard lock(g_shared_mutex);
  g_shared = std::make_unique<Executor>(std::max(1u, workers));
}

}  // namespace trunk
