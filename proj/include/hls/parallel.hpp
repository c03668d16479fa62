#pragma once
// Index-parallel loop honouring the HLS_THREADS cap.

#include <cstddef>
#include <functional>

namespace hls {

/// Worker count: hardware concurrency, capped by HLS_THREADS when set (minimum 1).
std::size_t worker_count();

/// Calls body(i) for i in [0, count). Exceptions from workers are rethrown (first one wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hls
