#pragma once

#include <Eigen/Core>

#include <functional>

namespace fracfocus {

/// Worker count used by parallel_for. 0 selects hardware concurrency. The
/// FRACFOCUS_THREADS environment variable, when set, takes precedence.
void set_thread_count(int threads);
int thread_count();

/// Calls body(k) for k in [0, n), split into contiguous blocks across
/// threads. Each index is handled by exactly one call.
void parallel_for(Eigen::Index n, const std::function<void(Eigen::Index)>& body);

}  // namespace fracfocus
