#pragma once

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace almlab {

// Honors ALMLAB_THREADS as an upper bound on the OpenMP team size.
inline int apply_thread_cap() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("ALMLAB_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = cap;
    }
    omp_set_num_threads(n);
    return n;
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace almlab
