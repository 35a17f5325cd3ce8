#pragma once

// Thin shim so the library builds with or without -fopenmp.

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hyperslice {

inline int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Sets the worker count for subsequent parallel kernels. Non-positive values are ignored.
inline void set_threads(int threads)
{
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

inline bool openmp_enabled()
{
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

}  // namespace hyperslice
