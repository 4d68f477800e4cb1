#pragma once

#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace collarspec::par {

enum class Policy { serial, openmp };

// Process-wide worker count.  0 = runtime default; 1 forces the serial
// reference path everywhere.
void set_threads(int n);
int threads();

Policy default_policy();

// Runs f(i) for i in [0, n).  Each index must write only to its own slot;
// results are required to be independent of execution order, so the serial
// and OpenMP paths produce identical output.
template <typename F>
void for_index(std::size_t n, F&& f, Policy policy = default_policy()) {
#ifdef _OPENMP
    if (policy == Policy::openmp && n > 1) {
        std::exception_ptr err;
        const int nt = threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt > 0 ? nt : omp_get_max_threads())
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                f(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return;
    }
#else
    (void)policy;
#endif
    for (std::size_t i = 0; i < n; ++i) f(i);
}

} // namespace collarspec::par
