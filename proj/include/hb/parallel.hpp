#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace hb {

/// Runs fn(i) for i in [0, n) across `threads` workers. Each index writes
/// only its own slot, so results are identical for any thread count; any
/// reduction over the results must happen afterwards in index order.
inline void parallel_for_index(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(threads, n);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace hb
