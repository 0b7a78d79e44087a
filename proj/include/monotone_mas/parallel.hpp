#pragma once

#include <cstddef>
#include <functional>

namespace mas {

/// Worker count: MONOTONE_MAS_THREADS if set and non-zero, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads using a
/// static block partition. Exceptions from body propagate (the one from the
/// lowest index wins). Output order is the caller's concern: write results
/// into a slot per index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace mas
