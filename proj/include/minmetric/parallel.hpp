#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace minmetric {

/// Worker cap: MINMETRIC_THREADS env var, else hardware concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("MINMETRIC_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Index-parallel map. Results land at fixed indices, so any later reduction
/// is order-independent of the thread count; fn must be pure per index.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    int workers = worker_count();
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        std::size_t lo = static_cast<std::size_t>(w) * chunk;
        if (lo >= count) break;
        std::size_t hi = std::min(count, lo + chunk);
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

/// Parallel map into a vector (deterministic: slot i <- fn(i)).
template <typename T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(count);
    parallel_for(count, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

}  // namespace minmetric
