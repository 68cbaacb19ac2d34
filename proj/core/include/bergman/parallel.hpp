#pragma once

#include <cstddef>
#include <functional>

namespace bergman {

/// Worker count used by parallel_for; 0 selects std::thread::hardware_concurrency().
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls body(i) for every i in [0, count). Iterations are split into contiguous
/// chunks; calls made from inside a running parallel_for execute serially.
/// Callers write per-index results and reduce afterwards in index order, which
/// keeps every reduction independent of the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace bergman
