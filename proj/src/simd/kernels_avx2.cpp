#include <immintrin.h>

#include "kernels.hpp"

namespace skewq::simd::detail {

namespace {

inline double horizontal_sum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double dot_avx2(const double* a, const double* b, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i)
        s += a[i] * b[i];
    return s;
}

void dot_rows_avx2(const double* rows, std::size_t count, std::size_t dim, const double* theta,
                   double* out)
{
    if (dim >= 4) {
        for (std::size_t k = 0; k < count; ++k)
            out[k] = dot_avx2(rows + k * dim, theta, dim);
        return;
    }
    // Short rows: four rows per lane group, one gather per coordinate.
    const auto stride = static_cast<long long>(dim);
    const __m256i offsets = _mm256_set_epi64x(3 * stride, 2 * stride, stride, 0);
    std::size_t k = 0;
    for (; k + 4 <= count; k += 4) {
        __m256d acc = _mm256_setzero_pd();
        const double* base = rows + k * dim;
        for (std::size_t j = 0; j < dim; ++j) {
            const __m256d col = _mm256_i64gather_pd(base + j, offsets, 8);
            acc = _mm256_fmadd_pd(col, _mm256_set1_pd(theta[j]), acc);
        }
        _mm256_storeu_pd(out + k, acc);
    }
    for (; k < count; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j)
            s += rows[k * dim + j] * theta[j];
        out[k] = s;
    }
}

Moments moments_avx2(const double* v, std::size_t n)
{
    __m256d sum = _mm256_setzero_pd();
    __m256d sq = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(v + i);
        sum = _mm256_add_pd(sum, x);
        sq = _mm256_fmadd_pd(x, x, sq);
    }
    Moments m{horizontal_sum(sum), horizontal_sum(sq)};
    for (; i < n; ++i) {
        m.sum += v[i];
        m.sum_sq += v[i] * v[i];
    }
    return m;
}

void hermite_avx2(int n, const double* x, std::size_t count, double* out)
{
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        __m256d prev = _mm256_set1_pd(1.0);
        if (n == 0) {
            _mm256_storeu_pd(out + i, prev);
            continue;
        }
        __m256d cur = xv;
        for (int k = 1; k < n; ++k) {
            const __m256d next = _mm256_fmsub_pd(xv, cur, _mm256_mul_pd(_mm256_set1_pd(k), prev));
            prev = cur;
            cur = next;
        }
        _mm256_storeu_pd(out + i, cur);
    }
    if (i < count)
        scalar_kernels.hermite(n, x + i, count - i, out + i);
}

void charlier_avx2(int n, double a, const double* x, std::size_t count, double* out)
{
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        __m256d prev = _mm256_set1_pd(1.0);
        if (n == 0) {
            _mm256_storeu_pd(out + i, prev);
            continue;
        }
        __m256d cur = _mm256_sub_pd(xv, av);
        for (int k = 1; k < n; ++k) {
            const __m256d shift = _mm256_sub_pd(xv, _mm256_set1_pd(k + a));
            const __m256d next = _mm256_fmsub_pd(shift, cur, _mm256_mul_pd(_mm256_set1_pd(k * a), prev));
            prev = cur;
            cur = next;
        }
        _mm256_storeu_pd(out + i, cur);
    }
    if (i < count)
        scalar_kernels.charlier(n, a, x + i, count - i, out + i);
}

} // namespace

const KernelTable avx2_kernels{dot_avx2, dot_rows_avx2, moments_avx2, hermite_avx2, charlier_avx2};

} // namespace skewq::simd::detail
