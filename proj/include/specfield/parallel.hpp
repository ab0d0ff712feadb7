#pragma once

#include <cstddef>
#include <functional>

namespace specfield {

/// Worker count: SPECFIELD_THREADS if set to a positive integer, else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) over contiguous chunks on worker_count() threads.
/// Callers write results into slot i and reduce afterwards in ascending order, so
/// output never depends on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace specfield
