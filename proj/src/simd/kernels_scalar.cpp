#include "kernels.hpp"

namespace skewq::simd::detail {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += a[i] * b[i];
    return s;
}

void dot_rows_scalar(const double* rows, std::size_t count, std::size_t dim, const double* theta,
                     double* out)
{
    for (std::size_t k = 0; k < count; ++k)
        out[k] = dot_scalar(rows + k * dim, theta, dim);
}

Moments moments_scalar(const double* v, std::size_t n)
{
    Moments m;
    for (std::size_t i = 0; i < n; ++i) {
        m.sum += v[i];
        m.sum_sq += v[i] * v[i];
    }
    return m;
}

void hermite_scalar(int n, const double* x, std::size_t count, double* out)
{
    for (std::size_t i = 0; i < count; ++i) {
        double prev = 1.0;
        if (n == 0) {
            out[i] = prev;
            continue;
        }
        double cur = x[i];
        for (int k = 1; k < n; ++k) {
            const double next = x[i] * cur - k * prev;
            prev = cur;
            cur = next;
        }
        out[i] = cur;
    }
}

void charlier_scalar(int n, double a, const double* x, std::size_t count, double* out)
{
    for (std::size_t i = 0; i < count; ++i) {
        double prev = 1.0;
        if (n == 0) {
            out[i] = prev;
            continue;
        }
        double cur = x[i] - a;
        for (int k = 1; k < n; ++k) {
            const double next = (x[i] - k - a) * cur - k * a * prev;
            prev = cur;
            cur = next;
        }
        out[i] = cur;
    }
}

} // namespace

const KernelTable scalar_kernels{dot_scalar, dot_rows_scalar, moments_scalar, hermite_scalar,
                                 charlier_scalar};

} // namespace skewq::simd::detail
