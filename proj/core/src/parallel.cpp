#include "e2sieve/parallel.hpp"

namespace e2sieve {

namespace {
unsigned g_threads = 0;
}

void set_thread_count(unsigned n) { g_threads = n; }

unsigned thread_count() {
    if (g_threads) return g_threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

}  // namespace e2sieve
