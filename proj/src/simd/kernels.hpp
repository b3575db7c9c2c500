#pragma once

#include <cstddef>

#include "skewq/simd.hpp"

namespace skewq::simd::detail {

struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    void (*dot_rows)(const double*, std::size_t, std::size_t, const double*, double*);
    Moments (*moments)(const double*, std::size_t);
    void (*hermite)(int, const double*, std::size_t, double*);
    void (*charlier)(int, double, const double*, std::size_t, double*);
};

extern const KernelTable scalar_kernels;
#if defined(SKEWQ_HAVE_AVX2)
extern const KernelTable avx2_kernels;
#endif

} // namespace skewq::simd::detail
