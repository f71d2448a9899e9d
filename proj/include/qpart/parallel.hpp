// parallel.hpp - minimal deterministic work sharing
//
// parallel_for runs f(i) for i in [0, n). Work items must be independent and
// write only to index-addressed slots; results are then identical for any
// thread count, which keeps seeded runs byte-reproducible. QPART_THREADS
// caps the pool.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace qpart {

inline unsigned max_threads() {
    static const unsigned cached = [] {
        unsigned hw = std::thread::hardware_concurrency();
        if (hw == 0) hw = 1;
        if (const char* env = std::getenv("QPART_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v >= 1 && static_cast<unsigned long>(v) < hw) hw = static_cast<unsigned>(v);
        }
        return hw;
    }();
    return cached;
}

template <typename F>
void parallel_for(std::size_t n, F&& f) {
    const unsigned threads = std::min<std::size_t>(max_threads(), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                f(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

} // namespace qpart
