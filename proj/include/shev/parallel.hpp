#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace shev {

// Runs fn(i) for i in [0, n) on a small worker pool. Work items are
// independent and write only to their own output slot, so the reduction
// order the caller applies afterwards stays deterministic.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn,
                         int threads = 0) {
    size_t n_threads = threads > 0 ? static_cast<size_t>(threads)
                                   : std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    n_threads = std::min(n_threads, n);
    if (n_threads <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace shev
