#pragma once

#include <cstddef>
#include <functional>

namespace helmprec {

/// Number of worker threads used by row-parallel loops.
///
/// Read once from HELMPREC_THREADS (positive integer). Unset means 1.
/// An unparsable or non-positive value throws std::invalid_argument on
/// first use.
std::size_t thread_count();

/// Override the thread count for the current process (tests, CLI).
void set_thread_count(std::size_t n);

/// Run body(begin, end) over [0, n) split into contiguous chunks, one per
/// thread. Chunks are disjoint so bodies writing to distinct indices need
/// no synchronisation.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace helmprec
