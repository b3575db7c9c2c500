#pragma once

#include <cstdint>
#include <vector>

#include "skewq/gauss_chaos.hpp"
#include "skewq/linalg.hpp"
#include "skewq/measures.hpp"
#include "skewq/rng.hpp"
#include "skewq/skew.hpp"
#include "skewq/test_function.hpp"

namespace skewq {

/// Seeded source of random laws, maps and test functions.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    Rng& rng() noexcept { return rng_; }
    double normal();
    double uniform(double lo, double hi);
    /// Uniform on {lo, ..., hi}.
    int integer(int lo, int hi);
    Matrix normal_matrix(int rows, int cols);
    Vector normal_vector(int n, double scale = 1.0);
    /// Uniform direction scaled to `norm`.
    Vector vector_with_norm(int n, double norm);
    /// rows x cols with orthonormal columns (cols <= rows).
    Matrix orthonormal_columns(int rows, int cols);

private:
    Rng rng_;
};

/// N(0, G G^T / r) with r = d, plus `floor` * I; with probability 0.3 (when
/// allowed and d > 1) r < d and no floor, giving a degenerate law.
GaussianLaw random_gaussian(Draw& draw, int dim, bool allow_degenerate = false, double floor = 0.05);

/// T = sqrt(u) T0 / s where s^2 is the largest generalised eigenvalue of
/// (T0 Q1 T0^T, Q2). u < 1 gives a skew map, u > 1 does not. Q2 must be
/// nondegenerate.
Matrix scaled_map(Draw& draw, const GaussianLaw& mu1, const GaussianLaw& mu2, double u);

/// Dimensions in [1, max_dim], u in [0.2, 0.95].
SkewTriple random_gaussian_triple(Draw& draw, int max_dim, bool allow_degenerate_source = true);

/// Pair (T, mu1, mu2) on R^{1,2} with at most two source atoms and three
/// target atoms, nu2 >= T(nu1).
SkewTriple random_jump_triple(Draw& draw);

/// Finite atomic Levy measure with `atoms` atoms of norm in [0.3, 2].
AtomicLevyMeasure random_levy(Draw& draw, int dim, int atoms);

/// sum of `terms` complex-coefficient exponentials with N(0, scale^2) frequencies.
TestFunction random_trigonometric(Draw& draw, int dim, int terms, double scale = 1.0);
/// Up to `terms` monomials of total degree <= max_degree with N(0,1) real and
/// imaginary parts; always contains one monomial of degree max_degree.
Polynomial random_polynomial(Draw& draw, int dim, int max_degree, int terms);

/// p(phi_{h_1}, ..., phi_{h_k}) on k <= min(rank, 2) random orthonormal directions.
CylindricalFunction random_cylindrical_polynomial(Draw& draw, const GaussianLaw& law, int max_degree, int terms);

} // namespace skewq
