#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "wrhss/core.hpp"

namespace wrhss {

/// Runs fn(i) for i in [0, n). Each index is processed by exactly one worker;
/// results written by index stay deterministic regardless of thread count.
inline void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    const int workers = static_cast<int>(std::min<long>(threads, n));
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (long i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace wrhss
