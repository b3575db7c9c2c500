#pragma once

#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "skewq/linalg.hpp"
#include "skewq/rng.hpp"

namespace skewq {

/// Characteristic function x* -> integral of exp(i<x, x*>) d(law).
class CharFn {
public:
    CharFn(int dim, std::function<Complex(const Vector&)> fn);

    int dim() const noexcept { return dim_; }
    Complex operator()(const Vector& functional) const;

private:
    int dim_;
    std::function<Complex(const Vector&)> fn_;
};

/// Centered Gaussian law N(0, Q) on R^d together with the factorisation
/// Q = j j^T through its reproducing kernel Hilbert space H ~ R^r.
///
/// j = V diag(sqrt(lambda)) over the eigenpairs with lambda above the rank
/// tolerance, so the columns of j are orthogonal and the standard basis of
/// R^r is the fixed orthonormal basis of H.
class GaussianLaw {
public:
    /// Throws NotPositiveSemidefinite if an eigenvalue is below -1e-12.
    explicit GaussianLaw(Matrix covariance);

    static GaussianLaw point_mass(int dim);

    int dim() const noexcept { return static_cast<int>(covariance_.rows()); }
    int rank() const noexcept { return static_cast<int>(factor_.cols()); }
    const Matrix& covariance() const noexcept { return covariance_; }
    /// The embedding j : H -> E (d x r).
    const Matrix& factor() const noexcept { return factor_; }
    const Vector& eigenvalues() const noexcept { return eigenvalues_; }

    /// Coordinates in H of a point of the support: j^+ x.
    Vector whiten(const Vector& x) const;
    /// The functional x* with j^T x* = h, of minimal norm.
    Vector functional_for(const Vector& h) const;
    /// h = j^T x*.
    Vector rkhs_image(const Vector& functional) const;

    /// exp(-1/2 <Q x*, x*>).
    Complex char_fn(const Vector& functional) const;

private:
    Matrix covariance_;
    Matrix factor_;
    Vector eigenvalues_;
    Matrix pseudo_inverse_;
};

/// Finite atomic Levy measure sum_j w_j delta_{y_j}, y_j != 0, w_j > 0.
class AtomicLevyMeasure {
public:
    AtomicLevyMeasure(int dim, std::vector<Vector> atoms, std::vector<double> weights);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }
    const Vector& atom(std::size_t j) const { return atoms_[j]; }
    double weight(std::size_t j) const { return weights_[j]; }
    const std::vector<Vector>& atoms() const noexcept { return atoms_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double total_mass() const;

    /// Index of the atom within `tol` (Euclidean) of y, or -1.
    int find_atom(const Vector& y, double tol) const;

private:
    int dim_;
    std::vector<Vector> atoms_;
    std::vector<double> weights_;
};

/// Law of X = xi + integral x Pibar(dx), where Pibar compensates the jumps of
/// norm <= 1 only. Its Levy symbol is
///   zeta(x*) = i<xi - c, x*> + sum_j w_j (exp(i<y_j, x*>) - 1),
/// with compensator drift c = sum_{|y_j| <= 1} w_j y_j.
class CompoundPoissonLaw {
public:
    CompoundPoissonLaw(Vector shift, std::shared_ptr<const AtomicLevyMeasure> levy);
    CompoundPoissonLaw(Vector shift, AtomicLevyMeasure levy);

    int dim() const noexcept { return static_cast<int>(shift_.size()); }
    const Vector& shift() const noexcept { return shift_; }
    const AtomicLevyMeasure& levy() const noexcept { return *levy_; }
    std::shared_ptr<const AtomicLevyMeasure> levy_ptr() const noexcept { return levy_; }

    const Vector& compensator() const noexcept { return compensator_; }
    /// xi - c: the deterministic part of X once jumps are counted raw.
    Vector effective_drift() const { return shift_ - compensator_; }

    /// X as a function of the atom counts N_j.
    Vector realise(std::span<const int> counts) const;

    Complex levy_symbol(const Vector& functional) const;
    Complex char_fn(const Vector& functional) const;

private:
    Vector shift_;
    std::shared_ptr<const AtomicLevyMeasure> levy_;
    Vector compensator_;
};

using Law = std::variant<GaussianLaw, CompoundPoissonLaw>;

int law_dim(const Law& law);

CharFn char_fn(const GaussianLaw& law);
CharFn char_fn(const CompoundPoissonLaw& law);
CharFn char_fn(const Law& law);

/// Characteristic function of delta_c.
CharFn point_mass_char_fn(const Vector& c);

/// Pointwise product (convolution of the underlying laws).
CharFn convolve_charfns(const CharFn& a, const CharFn& b);

/// Characteristic function of the image law T(mu): x* -> mu^(T^T x*).
CharFn push_forward(const CharFn& mu, const Matrix& t);

SampleBatch sample_gaussian(const GaussianLaw& law, Rng& rng, std::size_t count);
SampleBatch sample_compound_poisson(const CompoundPoissonLaw& law, Rng& rng, std::size_t count);

/// Parallel variants: `workers` chunks seeded by derive_seed(seed, k).
SampleBatch sample_gaussian(const GaussianLaw& law, std::uint64_t seed, std::size_t count, unsigned workers);
SampleBatch sample_compound_poisson(const CompoundPoissonLaw& law, std::uint64_t seed, std::size_t count,
                                    unsigned workers);

/// Samples either law class.
SampleBatch sample(const Law& law, std::uint64_t seed, std::size_t count, unsigned workers = 1);

/// Empirical characteristic function of a batch with its standard errors
/// (real and imaginary parts separately).
struct EmpiricalCharFn {
    Complex value;
    double se_real;
    double se_imag;
};

EmpiricalCharFn empirical_char_fn(const SampleBatch& samples, const Vector& functional);

} // namespace skewq
