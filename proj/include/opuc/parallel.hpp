#ifndef OPUC_PARALLEL_HPP
#define OPUC_PARALLEL_HPP

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace opuc {

/// Resolve a thread-count request: n > 0 uses n, n == 0 consults the
/// OPUC_THREADS environment variable and then hardware_concurrency.
inline std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("OPUC_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Run fn(i) for i in [0, count). Each index writes only its own output slot,
/// so results do not depend on the partitioning.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    std::size_t t = resolve_threads(threads);
    if (t <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    if (t > count) t = count;
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (std::size_t w = 0; w < t; ++w) {
        std::size_t lo = count * w / t;
        std::size_t hi = count * (w + 1) / t;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace opuc

#endif
