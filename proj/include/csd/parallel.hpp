#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace csd {

/// Number of worker threads to use when the caller passes 0.
inline std::size_t default_threads() {
    const auto n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

/// Runs body(i) for i in [0, n) on up to `threads` workers. Results must be
/// written to per-index slots so the outcome does not depend on scheduling.
/// The first exception thrown by any task is rethrown after all workers stop.
inline void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)> &body) {
    if (threads == 0) {
        threads = default_threads();
    }
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) {
                return;
            }
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                failed = true;
            }
        }
    };
    std::vector<std::jthread> pool;
    const std::size_t count = threads < n ? threads : n;
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        pool.emplace_back(worker);
    }
    pool.clear();
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace csd
