#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace fdb {

// Runs fn(i) for i in [0, n) across worker threads on statically assigned
// contiguous chunks. Workers write only to their own slots, so results are
// independent of the thread count. n_threads == 0 picks the hardware count.
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn, unsigned n_threads = 0) {
    if (n <= 0) return;
    unsigned workers = n_threads ? n_threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (static_cast<std::int64_t>(workers) > n) workers = static_cast<unsigned>(n);
    if (workers == 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::int64_t begin = static_cast<std::int64_t>(w) * chunk;
        const std::int64_t end = std::min(begin + chunk, n);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] {
            for (std::int64_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace fdb
