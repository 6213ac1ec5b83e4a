#pragma once

#include <cstddef>
#include <functional>

namespace tateforge {

// Worker count used by parallel_for. Initialized from TATEFORGE_THREADS
// (falling back to the hardware concurrency); set_worker_count overrides it.
unsigned worker_count();
void set_worker_count(unsigned n);

// Runs body(0..n-1) on up to worker_count() threads. Each index is processed
// exactly once; if any body throws, the exception with the smallest index is
// rethrown after all workers stop, so failures are reported deterministically.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tateforge
