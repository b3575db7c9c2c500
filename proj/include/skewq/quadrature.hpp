#pragma once

#include <functional>
#include <span>
#include <vector>

#include "skewq/linalg.hpp"

namespace skewq {

/// Nodes and weights integrating against the standard normal density.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Hermite rule for the standard normal weight (exact for
/// polynomials of degree <= 2n-1). Golub-Welsch followed by Newton polishing
/// on the orthonormal recurrence. Cached per n.
const QuadratureRule& gauss_hermite(int n);

/// Default node count per axis for smooth, non-polynomial integrands.
inline constexpr int kDefaultHermiteNodes = 40;

/// Tensor-grid dimension cap for general integrands.
inline constexpr int kMaxTensorGridDim = 4;

/// E f(Z), Z ~ N(0, I_dim), on an n^dim tensor grid.
Complex gaussian_expectation(int dim, int nodes, const std::function<Complex(std::span<const double>)>& f);

/// Calls fn(z, weight) at every node of the n^dim tensor grid.
void for_each_grid_point(int dim, int nodes, const std::function<void(std::span<const double>, double)>& fn);

/// Poisson(mean) probabilities p_0..p_K with K the smallest cutoff whose
/// tail mass P(N > K) is below `tail`.
std::vector<double> poisson_pmf_truncated(double mean, double tail = 1e-14);

/// Adaptive Simpson quadrature of a complex integrand with absolute tolerance.
Complex adaptive_simpson(const std::function<Complex(double)>& f, double a, double b, double tol,
                         int max_depth = 48);

} // namespace skewq
