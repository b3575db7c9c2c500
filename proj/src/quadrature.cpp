#include "skewq/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "skewq/error.hpp"

namespace skewq {

namespace {

QuadratureRule build_gauss_hermite(int n)
{
    QuadratureRule rule;
    if (n <= 0)
        throw std::invalid_argument("gauss_hermite: node count must be positive");
    // Jacobi matrix of the probabilists' Hermite recurrence.
    Matrix jacobi = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k)
        jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(jacobi);
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = solver.eigenvalues()(i);
        // Newton on the orthonormal polynomial p_n; p_n' = sqrt(n) p_{n-1}.
        double christoffel = 0.0;
        for (int iter = 0; iter < 3; ++iter) {
            double prev = 0.0;
            double cur = 1.0;
            christoffel = 1.0;
            for (int k = 0; k < n - 1; ++k) {
                const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                                    std::sqrt(static_cast<double>(k + 1));
                prev = cur;
                cur = next;
                christoffel += cur * cur;
            }
            const double pn = (x * cur - std::sqrt(static_cast<double>(n - 1)) * prev) /
                              std::sqrt(static_cast<double>(n));
            const double dpn = std::sqrt(static_cast<double>(n)) * cur;
            if (dpn == 0.0)
                break;
            x -= pn / dpn;
        }
        rule.nodes[static_cast<std::size_t>(i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = 1.0 / christoffel;
    }
    // Enforce exact symmetry of the rule.
    for (int i = 0; i < n / 2; ++i) {
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        const double x = 0.5 * (rule.nodes[hi] - rule.nodes[lo]);
        const double w = 0.5 * (rule.weights[hi] + rule.weights[lo]);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = rule.weights[hi] = w;
    }
    if (n % 2 == 1)
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    double total = 0.0;
    for (double w : rule.weights)
        total += w;
    for (double& w : rule.weights)
        w /= total;
    return rule;
}

Complex simpson_step(const std::function<Complex(double)>& f, double a, double b, Complex fa, Complex fm,
                     Complex fb, Complex whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const Complex flm = f(lm);
    const Complex frm = f(rm);
    const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const Complex delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

const QuadratureRule& gauss_hermite(int n)
{
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot)
        slot = std::make_unique<QuadratureRule>(build_gauss_hermite(n));
    return *slot;
}

void for_each_grid_point(int dim, int nodes, const std::function<void(std::span<const double>, double)>& fn)
{
    if (dim < 0)
        throw std::invalid_argument("for_each_grid_point: negative dimension");
    if (dim == 0) {
        fn({}, 1.0);
        return;
    }
    const QuadratureRule& rule = gauss_hermite(nodes);
    std::vector<int> counter(static_cast<std::size_t>(dim), 0);
    std::vector<double> z(static_cast<std::size_t>(dim));
    while (true) {
        double w = 1.0;
        for (int k = 0; k < dim; ++k) {
            const auto i = static_cast<std::size_t>(counter[static_cast<std::size_t>(k)]);
            z[static_cast<std::size_t>(k)] = rule.nodes[i];
            w *= rule.weights[i];
        }
        fn(z, w);
        int p = dim - 1;
        while (p >= 0 && ++counter[static_cast<std::size_t>(p)] == nodes) {
            counter[static_cast<std::size_t>(p)] = 0;
            --p;
        }
        if (p < 0)
            break;
    }
}

Complex gaussian_expectation(int dim, int nodes, const std::function<Complex(std::span<const double>)>& f)
{
    Complex total = 0.0;
    for_each_grid_point(dim, nodes, [&](std::span<const double> z, double w) { total += w * f(z); });
    return total;
}

std::vector<double> poisson_pmf_truncated(double mean, double tail)
{
    if (!(mean >= 0.0))
        throw std::invalid_argument("poisson_pmf_truncated: negative mean");
    std::vector<double> pmf{std::exp(-mean)};
    if (mean == 0.0)
        return pmf;
    for (int k = 0;; ++k) {
        const double next = pmf.back() * mean / (k + 1);
        // Geometric bound on the tail beyond the current cutoff, valid once k+2 > mean.
        if (k + 2 > mean) {
            const double bound = next / (1.0 - mean / (k + 2));
            if (bound < tail)
                break;
        }
        pmf.push_back(next);
    }
    return pmf;
}

Complex adaptive_simpson(const std::function<Complex(double)>& f, double a, double b, double tol, int max_depth)
{
    if (a == b)
        return 0.0;
    const Complex fa = f(a);
    const Complex fb = f(b);
    const Complex fm = f(0.5 * (a + b));
    const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

} // namespace skewq
