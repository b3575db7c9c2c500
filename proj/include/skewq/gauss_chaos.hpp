#pragma once

#include <span>
#include <vector>

#include "skewq/measures.hpp"
#include "skewq/skew.hpp"
#include "skewq/tensor.hpp"
#include "skewq/test_function.hpp"

namespace skewq {

using ComplexVector = Eigen::VectorXcd;

/// coeff * u^powers * exp(<rate, u>).
struct ExpPolyTerm {
    Complex coeff;
    std::vector<int> powers;
    ComplexVector rate;
};

/// Finite sum of ExpPolyTerms on R^k. Closed under partial differentiation,
/// and every term factorises over the coordinates.
class OuterFunction {
public:
    explicit OuterFunction(int arity);
    static OuterFunction constant(int arity, Complex value);
    static OuterFunction from_polynomial(const Polynomial& p);
    /// coeff * exp(<rate, u>).
    static OuterFunction exponential(ComplexVector rate, Complex coeff = 1.0);

    int arity() const noexcept { return arity_; }
    const std::vector<ExpPolyTerm>& terms() const noexcept { return terms_; }
    void add_term(ExpPolyTerm term);
    bool is_polynomial() const;
    /// Largest total power among the terms.
    int max_power() const;

    Complex operator()(std::span<const double> u) const;
    OuterFunction derivative(int axis) const;
    /// levels[n][rank] = partial derivative along the multiset `rank` of
    /// multiset_index(arity, n), for n = 0..max_order.
    std::vector<std::vector<OuterFunction>> partial_levels(int max_order) const;
    /// E g(U) for U standard normal on R^k (one-dimensional Gauss-Hermite per
    /// coordinate of each term).
    Complex standard_expectation() const;

private:
    int arity_;
    std::vector<ExpPolyTerm> terms_;
};

/// f(x) = g(phi_{h_1}(x), ..., phi_{h_k}(x)) for orthonormal h_i in H.
class CylindricalFunction {
public:
    /// directions: r x k with orthonormal columns (r = rank of the law).
    CylindricalFunction(GaussianLaw law, Matrix directions, OuterFunction outer);

    /// e_h = exp(phi_h - |h|^2 / 2).
    static CylindricalFunction exponential_vector(const GaussianLaw& law, const Vector& h);
    /// phi_h.
    static CylindricalFunction linear(const GaussianLaw& law, const Vector& h);
    /// K_{mu, x*} = exp(i phi_h + |h|^2 / 2) with h = j^T x*.
    static CylindricalFunction exp_martingale(const GaussianLaw& law, const Vector& functional);
    /// p(phi_{h_1}, ..., phi_{h_k}).
    static CylindricalFunction polynomial(const GaussianLaw& law, const Matrix& directions, const Polynomial& p);

    const GaussianLaw& law() const noexcept { return law_; }
    const Matrix& directions() const noexcept { return directions_; }
    const OuterFunction& outer() const noexcept { return outer_; }
    int arity() const noexcept { return outer_.arity(); }

    /// (phi_{h_1}(x), ..., phi_{h_k}(x)).
    Vector coordinates(const Vector& x) const;
    Complex operator()(const Vector& x) const;

private:
    GaussianLaw law_;
    Matrix directions_;
    OuterFunction outer_;
};

/// Complex symmetric tensor as a pair of real ones.
struct ComplexSymTensor {
    SymTensor re;
    SymTensor im;
    double norm() const;
};

ComplexSymTensor operator-(const ComplexSymTensor& a, const ComplexSymTensor& b);
ComplexSymTensor lift_map(const Matrix& a, const ComplexSymTensor& t);
/// <t, h_1 (.) ... (.) h_n> for the symmetrised product of the directions.
Complex contract_directions(const ComplexSymTensor& t, const std::vector<Vector>& directions);

/// Chaos coefficients (E D^n f)_{n <= N} of a complex function.
struct ChaosCoefficients {
    std::vector<ComplexSymTensor> components;
    int truncation() const noexcept { return static_cast<int>(components.size()) - 1; }
    FockVector real_part() const;
    FockVector imag_part() const;
};

/// x* with j^T x* = h (minimal norm). Throws InconsistentDirection when h
/// does not have rank(Q) coordinates.
Vector phi_functional(const Vector& h, const GaussianLaw& law);
/// phi_h(x) = <x, x*>.
double phi(const Vector& h, const Vector& x, const GaussianLaw& law);

/// x -> D^n f(x) as a symmetric tensor over H.
std::function<ComplexSymTensor(const Vector&)> malliavin_derivative(const CylindricalFunction& f, int n);

/// Components E_mu D^n f for n = 0..N.
ChaosCoefficients stroock_coefficients(const CylindricalFunction& f, int truncation);

/// I_n(t)(x) = sum_alpha t_alpha prod_j He_{alpha_j}(u_j), u = j^+ x, for t
/// over H ~ R^r in multiset storage. With this normalisation
/// E[I_n(s) I_m(t)] = delta_{nm} n! <s, t>.
double multiple_integral(const SymTensor& t, const GaussianLaw& law, const Vector& x);

/// sum_n (1/n!) I_n(c_n)(x).
Complex chaos_evaluate(const ChaosCoefficients& c, const GaussianLaw& law, const Vector& x);

Complex stroock_reconstruct(const CylindricalFunction& f, int truncation, const Vector& x);
/// (E_mu |f - reconstruction|^2)^(1/2) by quadrature over the active directions.
double stroock_l2_residual(const CylindricalFunction& f, int truncation);

/// P_T f(x) for cylindrical f on the target of a Gaussian triple, by
/// quadrature over the active directions of the factor.
Complex mehler_apply(const SkewTriple& triple, const CylindricalFunction& f, const Vector& x);

/// E_{mu1} D^n P_T f for n = 0..N, computed directly from the law of
/// B u + W with B = H^T (T restricted to H1) and W the factor's projection.
ChaosCoefficients transported_derivatives(const SkewTriple& triple, const CylindricalFunction& f, int truncation);

/// Second quantisation route: componentwise lift of M^T applied to the
/// coefficients of f, M = restrict_to_rkhs(T).
ChaosCoefficients second_quantised(const SkewTriple& triple, const ChaosCoefficients& coeffs);

/// |E_{mu1} D^n_{h_1..h_n} P_T f - E_{mu2} D^n_{M h_1..M h_n} f|.
double verify_derivative_intertwine(const SkewTriple& triple, const CylindricalFunction& f,
                                    const std::vector<Vector>& directions);

struct DiagramResidual {
    double coefficient = 0.0;
    double reconstruction = 0.0;
};

/// (a) max_n |E_{mu1} D^n P_T f - M^T(.)n E_{mu2} D^n f|,
/// (b) max over probes of |P_T f(x) - chaos reconstruction of the lifted
/// coefficients at x|.
DiagramResidual verify_gaussian_diagram(const SkewTriple& triple, const CylindricalFunction& f, int truncation,
                                        const std::vector<Vector>& probes);

struct IsometryResidual {
    double isometry = 0.0;      // same-degree Gram entries vs n! <s, t>
    double orthogonality = 0.0; // cross-degree Gram entries vs 0
};

/// Gram matrix of I_n over the multiset basis tensors of degrees 0..max_degree,
/// by exact Gauss-Hermite quadrature, compared with delta_{nm} n! <s, t>
/// after normalisation.
IsometryResidual chaos_isometry_check(const GaussianLaw& law, int max_degree);

} // namespace skewq
