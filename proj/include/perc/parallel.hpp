// Sample-parallel execution with deterministic results: indices are assigned
// statically, per-sample outputs land in preallocated slots, and reductions
// happen serially in index order.
#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace perc {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

template <typename Fn>
void parallel_for_index(uint64_t count, int threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || count < 2) {
        for (uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([t, threads, count, &fn] {
            for (uint64_t i = t; i < count; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace perc
