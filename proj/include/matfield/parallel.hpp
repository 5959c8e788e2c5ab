#pragma once
// Minimal work-sharing helper.  Heavy per-mode loops go through parallel_for,
// which splits the index range across a small thread pool when the configured
// thread count exceeds one and otherwise runs inline.

#include <cstddef>
#include <thread>
#include <vector>

namespace matfield {

inline int& thread_count() {
    static int n = 1;
    return n;
}

inline void set_thread_count(int n) { thread_count() = n < 1 ? 1 : n; }

template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn&& fn) {
    const int nt = thread_count();
    if (nt <= 1 || end - begin < 2048) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return;
    }
    const std::size_t total = end - begin;
    const std::size_t chunk = (total + nt - 1) / nt;
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        const std::size_t lo = begin + chunk * t;
        if (lo >= end) break;
        const std::size_t hi = lo + chunk < end ? lo + chunk : end;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace matfield
