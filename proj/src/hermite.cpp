#include "skewq/hermite.hpp"

#include <cmath>
#include <stdexcept>

namespace skewq {

double hermite(int n, double x)
{
    if (n < 0)
        throw std::invalid_argument("hermite: negative degree");
    double prev = 1.0;
    if (n == 0)
        return prev;
    double cur = x;
    for (int k = 1; k < n; ++k) {
        const double next = x * cur - k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> hermite_all(int n, double x)
{
    if (n < 0)
        throw std::invalid_argument("hermite_all: negative degree");
    std::vector<double> h(static_cast<std::size_t>(n) + 1);
    h[0] = 1.0;
    if (n >= 1)
        h[1] = x;
    for (int k = 1; k < n; ++k)
        h[static_cast<std::size_t>(k) + 1] = x * h[static_cast<std::size_t>(k)] - k * h[static_cast<std::size_t>(k) - 1];
    return h;
}

HermiteTable::HermiteTable(int max_degree)
{
    if (max_degree < 0)
        throw std::invalid_argument("HermiteTable: negative degree");
    coeffs_.push_back({1.0});
    if (max_degree >= 1)
        coeffs_.push_back({0.0, 1.0});
    for (int k = 1; k < max_degree; ++k) {
        const auto& cur = coeffs_[static_cast<std::size_t>(k)];
        const auto& prev = coeffs_[static_cast<std::size_t>(k) - 1];
        std::vector<double> next(cur.size() + 1, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i)
            next[i + 1] += cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i)
            next[i] -= k * prev[i];
        coeffs_.push_back(std::move(next));
    }
}

double HermiteTable::operator()(int n, double x) const
{
    const auto& c = coefficients(n);
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        v = v * x + *it;
    return v;
}

double hermite_generating_residual(double t, double x, int truncation)
{
    const std::vector<double> h = hermite_all(truncation, x);
    double sum = 0.0;
    double tn = 1.0;
    double fact = 1.0;
    for (int n = 0; n <= truncation; ++n) {
        if (n > 0) {
            tn *= t;
            fact *= n;
        }
        sum += tn / fact * h[static_cast<std::size_t>(n)];
    }
    return std::abs(std::exp(t * x - 0.5 * t * t) - sum);
}

} // namespace skewq
