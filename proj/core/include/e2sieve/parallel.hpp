#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace e2sieve {

// Process-wide worker count used by the segment-parallel kernels.
// 0 means "use std::thread::hardware_concurrency()".
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs fn(chunk_index) for chunk_index in [0, n_chunks) on a small thread
// pool and returns the per-chunk results indexed by chunk.  Callers reduce
// the vector in chunk order, so the combined result is independent of the
// worker count: partition + ordered reduction is the determinism contract.
template <class Fn>
auto parallel_map(std::size_t n_chunks, Fn fn)
    -> std::vector<decltype(fn(std::size_t{0}))> {
    using R = decltype(fn(std::size_t{0}));
    std::vector<R> out(n_chunks);
    unsigned workers = thread_count();
    if (workers <= 1 || n_chunks <= 1) {
        for (std::size_t i = 0; i < n_chunks; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n_chunks) return;
            out[i] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned n = workers < n_chunks ? workers : static_cast<unsigned>(n_chunks);
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
}

// Kahan-compensated accumulator; deterministic for a fixed add order.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

}  // namespace e2sieve
