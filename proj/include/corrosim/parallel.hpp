#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace corrosim {

// Runs fn(0..count-1) over a shared work queue. Results must be written by
// the callee into index-addressed storage, so output layout is deterministic
// regardless of scheduling. The first exception is rethrown on the caller.
inline void run_indexed(std::size_t count, int workers,
                        const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    unsigned n = workers > 0 ? static_cast<unsigned>(workers)
                             : std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    n = std::min<unsigned>(n, static_cast<unsigned>(count));

    if (n <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace corrosim
