#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace mdl {

/// Index-parallel map over [0, count). Tasks must be independent and write
/// only to their own slot, so results are ordered by index regardless of
/// scheduling. Thread count follows the hardware (MDL_THREADS overrides);
/// a single worker degrades to a plain loop.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("MDL_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) workers = static_cast<std::size_t>(v);
    }
    if (workers > count) workers = count;
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(failure);
}

} // namespace mdl
