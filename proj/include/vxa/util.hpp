#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace vxa {

// Runs fn(0..n-1), optionally on a small worker pool. Work items write to
// disjoint slots, so the result is independent of the pool size.
inline void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int count = std::min<int>(jobs, static_cast<int>(n));
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace vxa
