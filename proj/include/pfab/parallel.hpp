#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pfab::par {

enum class Policy { serial, openmp };

inline Policy& default_policy() {
#ifdef _OPENMP
    static Policy p = Policy::openmp;
#else
    static Policy p = Policy::serial;
#endif
    return p;
}

/// Index-parallel loop; results must not depend on execution order.
template <class F>
void for_each_index(std::size_t n, F&& f, Policy policy) {
#ifdef _OPENMP
    if (policy == Policy::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i) f(static_cast<std::size_t>(i));
        return;
    }
#endif
    (void)policy;
    for (std::size_t i = 0; i < n; ++i) f(i);
}

template <class F>
void for_each_index(std::size_t n, F&& f) {
    for_each_index(n, static_cast<F&&>(f), default_policy());
}

}  // namespace pfab::par
