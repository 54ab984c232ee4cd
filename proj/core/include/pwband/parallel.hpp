#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pwband {

/// Number of workers to use when the caller asks for 0.
inline unsigned default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Calls fn(i) for i in [0, count) on a pool of worker threads and returns the results
/// indexed by i. The first exception thrown by any task is rethrown after all workers stop.
template <class Result, class Fn>
std::vector<Result> parallel_map(std::int64_t count, unsigned workers, Fn fn) {
    std::vector<Result> out(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
    if (count <= 0) { return out; }
    if (workers == 0) { workers = default_workers(); }
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, count));
    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= count || failed.load()) { return; }
            try {
                out[static_cast<std::size_t>(i)] = fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) { error = std::current_exception(); }
                failed.store(true);
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) { pool.emplace_back(work); }
        for (auto &t : pool) { t.join(); }
    }
    if (error) { std::rethrow_exception(error); }
    return out;
}

}  // namespace pwband
