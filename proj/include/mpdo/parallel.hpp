#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace mpdo {

// Global worker count, settable from the CLI (--threads). 0 = hardware.
inline std::atomic<unsigned>& thread_count_slot() {
    static std::atomic<unsigned> k{0};
    return k;
}
inline void set_thread_count(unsigned k) { thread_count_slot().store(k); }
inline unsigned thread_count() {
    unsigned k = thread_count_slot().load();
    if (k == 0) k = std::thread::hardware_concurrency();
    return k == 0 ? 1 : k;
}

// Runs fn(i) for i in [0, n). Work items must be independent; each writes
// only its own slots, so results do not depend on the thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = thread_count();
    if (n == 0) return;
    if (workers <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    pool.reserve(spawn);
    for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (failed.load() && err) std::rethrow_exception(err);
}

} // namespace mpdo
