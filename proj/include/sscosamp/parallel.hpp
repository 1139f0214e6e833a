#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sscosamp {

// Worker count: SSCOSAMP_WORKERS when set, otherwise hardware concurrency.
inline int default_workers() {
    if (const char* env = std::getenv("SSCOSAMP_WORKERS")) {
        int parsed = std::atoi(env);
        if (parsed >= 1) return parsed;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw >= 1 ? static_cast<int>(hw) : 1;
}

// Runs fn(0..count-1), dispatching indices over `workers` threads. Callers are
// responsible for writing results into index-addressed slots so the outcome is
// identical for any worker count. The first exception thrown by fn is rethrown
// after all threads join.
inline void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    if (workers > count) workers = count;
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace sscosamp
