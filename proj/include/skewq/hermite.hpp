#pragma once

#include <vector>

namespace skewq {

/// Probabilists' Hermite polynomial He_n(x):
/// He_{n+1}(x) = x He_n(x) - n He_{n-1}(x), He_0 = 1, He_1 = x.
double hermite(int n, double x);

/// He_0(x), ..., He_n(x).
std::vector<double> hermite_all(int n, double x);

/// Monomial coefficients of He_0..He_N, built once by the recurrence.
class HermiteTable {
public:
    explicit HermiteTable(int max_degree);

    int max_degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    /// coefficients(n)[k] is the coefficient of x^k in He_n.
    const std::vector<double>& coefficients(int n) const { return coeffs_.at(static_cast<std::size_t>(n)); }
    /// Horner evaluation from the stored coefficients.
    double operator()(int n, double x) const;

private:
    std::vector<std::vector<double>> coeffs_;
};

/// |exp(t x - t^2/2) - sum_{n<=N} t^n/n! He_n(x)|.
double hermite_generating_residual(double t, double x, int truncation);

} // namespace skewq
