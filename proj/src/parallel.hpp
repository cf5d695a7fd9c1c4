#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace datasel::detail {

/// Runs fn(i) for i in [0, n) across worker threads. Each index is
/// processed exactly once by exactly one worker, so writes to disjoint
/// per-index slots are race-free and the result is independent of the
/// worker count. threads <= 0 selects hardware_concurrency.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (workers > n) workers = n > 0 ? static_cast<unsigned>(n) : 1;

    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = begin + chunk < n ? begin + chunk : n;
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace datasel::detail
