#include "collarspec/parallel.hpp"

#include <atomic>

namespace collarspec::par {

namespace {
std::atomic<int> g_threads{0};
}

void set_threads(int n) { g_threads.store(n < 0 ? 0 : n); }

int threads() { return g_threads.load(); }

Policy default_policy() {
#ifdef _OPENMP
    return threads() == 1 ? Policy::serial : Policy::openmp;
#else
    return Policy::serial;
#endif
}

} // namespace collarspec::par
