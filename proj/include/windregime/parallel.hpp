#pragma once

#include <cstddef>
#include <functional>

namespace wr {

/// Worker count from PIPELINE_THREADS, else the hardware concurrency (at least 1).
std::size_t pipeline_threads();

/// Runs fn(0) .. fn(n - 1) on up to pipeline_threads() workers. Each index is
/// run exactly once; the first exception is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace wr
