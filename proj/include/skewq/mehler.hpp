#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "skewq/skew.hpp"
#include "skewq/test_function.hpp"

namespace skewq {

/// Value with a standard error (0 for deterministic quadrature).
struct Estimate {
    Complex value;
    double std_error = 0.0;
};

/// Gauss-Hermite grids for Gaussian factors, truncated Poisson sums for jump
/// factors.
struct QuadratureMethod {};
struct MonteCarloMethod {
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};
using EvaluationMethod = std::variant<QuadratureMethod, MonteCarloMethod>;

/// P_T f(x) = integral of f(T x + y) rho(dy).
Estimate mehler_apply(const SkewTriple& triple, const TestFunction& f, const Vector& x,
                      const EvaluationMethod& method = QuadratureMethod{});

/// P_T f as a function on the source space. Polynomials stay polynomials
/// (moments of rho), trigonometric sums stay trigonometric (frequencies
/// pulled back by T^T); callbacks become callbacks evaluated by quadrature.
TestFunction mehler_transform(const SkewTriple& triple, const TestFunction& f);

/// Trigonometric f only: P f(x) = sum_k a_k rho^(theta_k) exp(i<x, T^T theta_k>)
/// for a factor known through its characteristic function.
TestFunction mehler_transform(const Matrix& t, const CharFn& rho, const TestFunction& f);

/// E_mu f: exact for polynomials (moments) and trigonometric sums
/// (characteristic function), tensor-grid or enumeration for callbacks.
Complex expectation(const TestFunction& f, const Law& law);
/// (E_mu |f|^2)^(1/2), same methods.
double l2_norm(const TestFunction& f, const Law& law);

struct NormEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct ContractionCheck {
    NormEstimate lhs; // |P_T f|_{L^p(mu1)}
    NormEstimate rhs; // |f|_{L^p(mu2)}
    bool holds(double sigmas = 3.0) const;
};

/// Monte Carlo estimates of both L^p norms, delta-method standard errors.
ContractionCheck mehler_contraction_residual(const SkewTriple& triple, const TestFunction& f, double p,
                                             std::size_t samples, std::uint64_t seed, unsigned workers = 1);

/// |K_{mu1, T^T x*}|_{L^2(mu1)} / |K_{mu2, x*}|_{L^2(mu2)} in closed form for a
/// Gaussian pair: exp(1/2 (x*^T T Q1 T^T x* - x*^T Q2 x*)).
double gaussian_exp_martingale_norm_ratio(const SkewTriple& triple, const Vector& functional);

/// max over probes of |P_T K_{mu2,x*}(x) - K_{mu1,T^T x*}(x)| by quadrature.
double verify_identityPTK(const SkewTriple& triple, const Vector& functional, const std::vector<Vector>& probes);

struct GramCertificate {
    ComplexMatrix gram;
    double min_eigenvalue = 0.0;
};

/// G_mn = mu^(x*_m - x*_n) and its smallest eigenvalue.
GramCertificate gram_independence(const CharFn& mu, const std::vector<Vector>& functionals);

} // namespace skewq
