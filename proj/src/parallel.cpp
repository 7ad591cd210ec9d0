#include "fracfocus/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fracfocus {
namespace {

std::atomic<int> g_threads{0};

int env_threads() {
  const char* env = std::getenv("FRACFOCUS_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  const int value = std::atoi(env);
  return value > 0 ? value : 0;
}

}  // namespace

void set_thread_count(int threads) { g_threads = std::max(threads, 0); }

int thread_count() {
  if (const int env = env_threads(); env > 0) return env;
  if (const int requested = g_threads.load(); requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for(Eigen::Index n, const std::function<void(Eigen::Index)>& body) {
  if (n <= 0) return;
  const auto workers = static_cast<Eigen::Index>(std::min<Eigen::Index>(thread_count(), n));
  if (workers <= 1) {
    for (Eigen::Index k = 0; k < n; ++k) body(k);
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (Eigen::Index w = 0; w < workers; ++w) {
    const Eigen::Index begin = n * w / workers;
    const Eigen::Index end = n * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (Eigen::Index k = begin; k < end; ++k) body(k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace fracfocus
