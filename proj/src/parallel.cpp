#include "fraclp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fraclp {
namespace {

int initial_workers() {
  if (const char* env = std::getenv("FRACLP_WORKERS")) {
    try {
      int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
    }
  }
  return 1;
}

std::atomic<int>& workers_slot() {
  static std::atomic<int> slot{initial_workers()};
  return slot;
}

}  // namespace

int worker_count() { return workers_slot().load(); }

void set_worker_count(int workers) { workers_slot().store(std::max(1, workers)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace fraclp
