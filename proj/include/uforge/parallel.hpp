#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace uforge {

/// Runs fn(0..count-1) on up to `jobs` worker threads. Results must go into
/// per-index slots; scheduling order is unspecified but index coverage is
/// exactly once.
inline void parallel_for_index(int count, int jobs, const std::function<void(int)>& fn) {
    if (count <= 0) {
        return;
    }
    if (jobs <= 1 || count == 1) {
        for (int i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            fn(i);
        }
    };
    const int n_threads = std::min(jobs, count);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
}

}  // namespace uforge
