#include "gspo/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gspo {

namespace {
std::atomic<int> g_threads{0};
}

void setWorkerThreads(int threads) {
    g_threads = threads < 0 ? 0 : threads;
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
}

int workerThreads() {
#ifdef _OPENMP
    return g_threads > 0 ? g_threads.load() : omp_get_max_threads();
#else
    return 1;
#endif
}

void parallelFor(std::size_t count, const std::function<void(std::size_t)>& body,
                 std::size_t minParallel) {
    std::exception_ptr failure;
    long failedAt = -1;
    std::mutex failureMutex;
    const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic) if (count >= minParallel && workerThreads() > 1)
    for (long t = 0; t < n; ++t) {
        try {
            body(static_cast<std::size_t>(t));
        } catch (...) {
            std::lock_guard lock(failureMutex);
            if (failedAt < 0 || t < failedAt) {
                failure = std::current_exception();
                failedAt = t;
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace gspo
