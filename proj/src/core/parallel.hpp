#pragma once

#include <cstddef>
#include <functional>

namespace dg3pd {

// Worker count: hardware concurrency capped by the DG3PD_THREADS environment
// variable (read once). Always >= 1.
std::size_t worker_count();

// Runs fn over contiguous chunks of [0, n). Chunk boundaries depend only on n
// and the worker count, so elementwise work stays deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace dg3pd
