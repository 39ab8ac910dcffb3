#pragma once

#include <cstddef>
#include <functional>

namespace polydecay {

// Degree of parallelism, read from POLYDECAY_THREADS (default: hardware
// concurrency). Can be overridden for the current process.
std::size_t thread_count();
void set_thread_count(std::size_t n);

// Runs body(i) for i in [0, n). Each index is written by exactly one worker,
// so callers that store into preallocated slots get schedule-independent
// results. Nested calls run serially on the calling worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace polydecay
