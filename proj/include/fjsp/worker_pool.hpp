#ifndef FJSP_WORKER_POOL_HPP
#define FJSP_WORKER_POOL_HPP

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace fjsp {

// Runs body(0..count-1) across `workers` threads. Callers own determinism:
// results must be written to per-index slots.
inline void run_pool(int workers, int count, const std::function<void(int)>& body) {
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace fjsp

#endif // FJSP_WORKER_POOL_HPP
