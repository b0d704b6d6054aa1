#pragma once

#include <cstddef>
#include <functional>

namespace covario {

/// Worker count: COVARIO_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Indices are
/// split into contiguous blocks, so callers writing to slot i of a
/// pre-sized output get deterministic results regardless of scheduling. The
/// first exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace covario
