#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "skewq/measures.hpp"
#include "skewq/point_configuration.hpp"
#include "skewq/skew.hpp"
#include "skewq/test_function.hpp"

namespace skewq {

/// Function of a point configuration on the atoms of a fixed Levy measure,
/// evaluated through the multiplicity vector.
class ConfigFunction {
public:
    enum class Kind { linear_statistic, count_polynomial, pullback, callback };

    /// sum_j g_j eta({y_j}).
    static ConfigFunction linear_statistic(std::shared_ptr<const AtomicLevyMeasure> levy, std::vector<double> g);
    /// eta(B) for B a set of atom indices.
    static ConfigFunction count_in(std::shared_ptr<const AtomicLevyMeasure> levy, const std::vector<std::size_t>& atoms);
    /// p(eta({y_1}), ..., eta({y_m})).
    static ConfigFunction count_polynomial(std::shared_ptr<const AtomicLevyMeasure> levy, Polynomial p);
    /// eta -> f(xi - c + sum_j eta({y_j}) y_j), the pullback of f under the
    /// representation of the law as a functional of its Poisson measure.
    static ConfigFunction pullback(const CompoundPoissonLaw& law, TestFunction f);
    static ConfigFunction callback(std::shared_ptr<const AtomicLevyMeasure> levy,
                                   std::function<Complex(std::span<const int>)> fn);

    Kind kind() const noexcept { return kind_; }
    const AtomicLevyMeasure& levy() const noexcept { return *levy_; }
    const std::shared_ptr<const AtomicLevyMeasure>& levy_ptr() const noexcept { return levy_; }

    Complex evaluate(std::span<const int> counts) const;
    Complex operator()(const PointConfiguration& eta) const;

private:
    ConfigFunction(Kind kind, std::shared_ptr<const AtomicLevyMeasure> levy,
                   std::function<Complex(std::span<const int>)> fn);

    Kind kind_;
    std::shared_ptr<const AtomicLevyMeasure> levy_;
    std::function<Complex(std::span<const int>)> fn_;
};

/// Symmetric function on the n-fold product of the atom set, one value per
/// multiset of atom indices (multiset_index order).
class SymFnTensor {
public:
    SymFnTensor(std::shared_ptr<const AtomicLevyMeasure> levy, int degree);
    SymFnTensor(std::shared_ptr<const AtomicLevyMeasure> levy, int degree, std::vector<Complex> values);

    int degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return values_.size(); }
    const AtomicLevyMeasure& levy() const noexcept { return *levy_; }
    const std::shared_ptr<const AtomicLevyMeasure>& levy_ptr() const noexcept { return levy_; }
    const std::vector<Complex>& values() const noexcept { return values_; }
    Complex operator[](std::size_t rank) const { return values_[rank]; }
    Complex& operator[](std::size_t rank) { return values_[rank]; }
    /// Value at (y_{i_1}, ..., y_{i_n}) in any order.
    Complex at(std::span<const int> atoms) const;

    /// sum over multisets of M(alpha) s_alpha conj(t_alpha) prod_j w_j^{alpha_j}.
    Complex inner(const SymFnTensor& other) const;
    /// L^2(nu^n) norm.
    double norm() const;

private:
    std::shared_ptr<const AtomicLevyMeasure> levy_;
    int degree_;
    std::vector<Complex> values_;
};

SymFnTensor operator-(const SymFnTensor& a, const SymFnTensor& b);

/// C_n(x; a) by the three-term recurrence.
double charlier(int n, double a, double x);

/// D^n_{y_1..y_n} f(eta) by inclusion-exclusion over the added points.
Complex difference_operator(const ConfigFunction& f, const PointConfiguration& eta, std::span<const std::size_t> atoms);

/// D~^n_{y_1..y_n} g(x) = sum over subsets S of (-1)^{n-|S|} g(x + sum_S y).
Complex tilde_difference(const TestFunction& g, const Vector& x, const std::vector<Vector>& points);
/// E_mu D~^n g by exact truncated summation.
Complex expected_tilde_difference(const TestFunction& g, const CompoundPoissonLaw& mu, const std::vector<Vector>& points);

/// Kernels tau^n f = E D^n f(Pi) for n = 0..N. Expectations are exact
/// truncated sums; callbacks on grids beyond kMaxEnumeration fall back to
/// Monte Carlo with the given sample count and seed.
std::vector<SymFnTensor> last_penrose_kernels(const ConfigFunction& f, int truncation,
                                              std::size_t mc_samples = 100000, std::uint64_t seed = 1);
SymFnTensor last_penrose_tau(const ConfigFunction& f, int n);

/// I_n(t)(eta) = sum_alpha t_alpha M(alpha) prod_j C_{alpha_j}(eta_j; w_j).
/// E[I_n(s) I_m(t)] = delta_{nm} n! <s, t>_{L^2(nu^n)}.
Complex poisson_multiple_integral(const SymFnTensor& t, const PointConfiguration& eta);

Complex last_penrose_reconstruct(const std::vector<SymFnTensor>& kernels, const PointConfiguration& eta);
Complex last_penrose_reconstruct(const ConfigFunction& f, int truncation, const PointConfiguration& eta);

/// (E |f - reconstruction|^2)^(1/2) by exact truncated summation.
double last_penrose_l2_residual(const ConfigFunction& f, int truncation);

struct PoissonIsometry {
    double norm_squared = 0.0;  // E |f|^2
    double chaos_squared = 0.0; // sum_n |tau^n f|^2 / n!
};
PoissonIsometry last_penrose_isometry(const ConfigFunction& f, int truncation);

struct PoissonIntegralIsometry {
    double isometry = 0.0;
    double orthogonality = 0.0;
};
/// Gram matrix of I_n over the multiset basis functions of degrees
/// 0..max_degree by exact summation, against delta_{nm} n! <s, t>.
PoissonIntegralIsometry poisson_isometry_check(const std::shared_ptr<const AtomicLevyMeasure>& levy, int max_degree);

/// prod_j (exp(i<y_j, x*>) - 1).
Complex product_exponential(const std::vector<Vector>& points, const Vector& functional);

/// |E_{mu1} D~^n_{y} P_T f - E_{mu2} D~^n_{T y} f|.
double verify_tilde_intertwine(const SkewTriple& triple, const TestFunction& f, const std::vector<Vector>& points);

/// g(T y_1, ..., T y_n) as a kernel over the source atoms. Every image must
/// be an atom of the target measure (snap 1e-9); otherwise AtomMismatch.
SymFnTensor contract_kernel(const SymFnTensor& t, const Matrix& map,
                            const std::shared_ptr<const AtomicLevyMeasure>& source);

/// max_n |tau_1^n(j_1 P_T f) - contract_kernel(tau_2^n(j_2 f), T)|.
double verify_poisson_diagram(const SkewTriple& triple, const TestFunction& f, int truncation);

} // namespace skewq
