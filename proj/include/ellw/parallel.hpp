#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ellw {

// Worker count: ELL_LOEWNER_THREADS caps (or sets) the fan-out; 0/unset means
// hardware concurrency.
inline int worker_count(int requested = 0) {
    int n = requested;
    if (n <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        n = hc > 0 ? static_cast<int>(hc) : 1;
    }
    if (const char* env = std::getenv("ELL_LOEWNER_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0 && cap < n) n = cap;
    }
    return n > 0 ? n : 1;
}

// Index-parallel loop; results must be written into per-index slots so the
// assembled output is independent of the worker count. The first exception
// wins and is rethrown on the caller thread.
inline void parallel_for(int n, const std::function<void(int)>& fn, int threads = 0) {
    const int workers = std::min(worker_count(threads), n > 0 ? n : 1);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ellw
