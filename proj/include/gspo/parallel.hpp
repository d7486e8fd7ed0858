#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>

namespace gspo {

/// Number of worker threads used by the OpenMP kernels (0 = runtime default).
void setWorkerThreads(int threads);
int workerThreads();

/// Runs body(0..count-1) across OpenMP threads when count >= minParallel.
/// If iterations throw, the exception from the lowest index is rethrown
/// after the loop, so failures do not depend on scheduling.
void parallelFor(std::size_t count, const std::function<void(std::size_t)>& body,
                 std::size_t minParallel = 2);

}  // namespace gspo
