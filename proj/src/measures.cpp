#include "skewq/measures.hpp"

#include <cmath>
#include <string>

#include "skewq/error.hpp"
#include "skewq/simd.hpp"

namespace skewq {

namespace {

constexpr double kPsdTolerance = 1e-12;
constexpr double kRankTolerance = 1e-12;
constexpr Complex kI{0.0, 1.0};

void require_dim(const Vector& v, int dim, const char* what)
{
    if (v.size() != dim)
        throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(dim) + ", got " +
                                std::to_string(v.size()));
}

} // namespace

CharFn::CharFn(int dim, std::function<Complex(const Vector&)> fn) : dim_(dim), fn_(std::move(fn)) {}

Complex CharFn::operator()(const Vector& functional) const
{
    require_dim(functional, dim_, "CharFn");
    return fn_(functional);
}

GaussianLaw::GaussianLaw(Matrix covariance) : covariance_(std::move(covariance))
{
    if (covariance_.rows() != covariance_.cols())
        throw DimensionMismatch("GaussianLaw: covariance must be square");
    if (max_abs(covariance_ - covariance_.transpose()) > 1e-12 * std::max(1.0, max_abs(covariance_)))
        throw ValidationError("GaussianLaw: covariance is not symmetric");
    covariance_ = symmetrized(covariance_);
    const int d = static_cast<int>(covariance_.rows());
    if (d == 0) {
        factor_ = Matrix(0, 0);
        eigenvalues_ = Vector(0);
        pseudo_inverse_ = Matrix(0, 0);
        return;
    }
    const SymmetricEigen eig = symmetric_eigen(covariance_);
    const double lmin = eig.values(d - 1);
    if (lmin < -kPsdTolerance)
        throw NotPositiveSemidefinite(lmin, "GaussianLaw covariance");
    const double cutoff = kRankTolerance * std::max(1.0, eig.values(0));
    int r = 0;
    while (r < d && eig.values(r) > cutoff)
        ++r;
    eigenvalues_ = eig.values.head(r);
    const Matrix v = eig.vectors.leftCols(r);
    factor_ = v * eigenvalues_.cwiseSqrt().asDiagonal();
    pseudo_inverse_ = eigenvalues_.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
}

GaussianLaw GaussianLaw::point_mass(int dim)
{
    return GaussianLaw(Matrix::Zero(dim, dim));
}

Vector GaussianLaw::whiten(const Vector& x) const
{
    require_dim(x, dim(), "GaussianLaw::whiten");
    return pseudo_inverse_ * x;
}

Vector GaussianLaw::functional_for(const Vector& h) const
{
    if (h.size() != rank())
        throw InconsistentDirection("direction has " + std::to_string(h.size()) +
                                    " coordinates but the Cameron-Martin space has dimension " +
                                    std::to_string(rank()));
    return pseudo_inverse_.transpose() * h;
}

Vector GaussianLaw::rkhs_image(const Vector& functional) const
{
    require_dim(functional, dim(), "GaussianLaw::rkhs_image");
    return factor_.transpose() * functional;
}

Complex GaussianLaw::char_fn(const Vector& functional) const
{
    require_dim(functional, dim(), "GaussianLaw::char_fn");
    return std::exp(-0.5 * functional.dot(covariance_ * functional));
}

AtomicLevyMeasure::AtomicLevyMeasure(int dim, std::vector<Vector> atoms, std::vector<double> weights)
    : dim_(dim), atoms_(std::move(atoms)), weights_(std::move(weights))
{
    if (atoms_.size() != weights_.size())
        throw ValidationError("AtomicLevyMeasure: atoms and weights differ in length");
    for (std::size_t j = 0; j < atoms_.size(); ++j) {
        require_dim(atoms_[j], dim_, "AtomicLevyMeasure atom");
        if (atoms_[j].norm() == 0.0)
            throw ValidationError("AtomicLevyMeasure: atom at the origin");
        if (!(weights_[j] > 0.0) || !std::isfinite(weights_[j]))
            throw ValidationError("AtomicLevyMeasure: weights must be positive and finite");
    }
}

double AtomicLevyMeasure::total_mass() const
{
    double m = 0.0;
    for (double w : weights_)
        m += w;
    return m;
}

int AtomicLevyMeasure::find_atom(const Vector& y, double tol) const
{
    for (std::size_t j = 0; j < atoms_.size(); ++j)
        if ((atoms_[j] - y).norm() <= tol)
            return static_cast<int>(j);
    return -1;
}

CompoundPoissonLaw::CompoundPoissonLaw(Vector shift, std::shared_ptr<const AtomicLevyMeasure> levy)
    : shift_(std::move(shift)), levy_(std::move(levy))
{
    if (!levy_)
        throw ValidationError("CompoundPoissonLaw: missing Levy measure");
    if (levy_->dim() != shift_.size())
        throw DimensionMismatch("CompoundPoissonLaw: shift and Levy measure dimensions differ");
    compensator_ = Vector::Zero(shift_.size());
    for (std::size_t j = 0; j < levy_->size(); ++j)
        if (levy_->atom(j).norm() <= 1.0)
            compensator_ += levy_->weight(j) * levy_->atom(j);
}

CompoundPoissonLaw::CompoundPoissonLaw(Vector shift, AtomicLevyMeasure levy)
    : CompoundPoissonLaw(std::move(shift), std::make_shared<const AtomicLevyMeasure>(std::move(levy)))
{
}

Vector CompoundPoissonLaw::realise(std::span<const int> counts) const
{
    if (counts.size() != levy_->size())
        throw DimensionMismatch("CompoundPoissonLaw::realise: one count per atom required");
    Vector x = effective_drift();
    for (std::size_t j = 0; j < counts.size(); ++j)
        if (counts[j] != 0)
            x += counts[j] * levy_->atom(j);
    return x;
}

Complex CompoundPoissonLaw::levy_symbol(const Vector& functional) const
{
    require_dim(functional, dim(), "CompoundPoissonLaw::levy_symbol");
    Complex z = kI * effective_drift().dot(functional);
    for (std::size_t j = 0; j < levy_->size(); ++j)
        z += levy_->weight(j) * (std::exp(kI * levy_->atom(j).dot(functional)) - 1.0);
    return z;
}

Complex CompoundPoissonLaw::char_fn(const Vector& functional) const
{
    return std::exp(levy_symbol(functional));
}

int law_dim(const Law& law)
{
    return std::visit([](const auto& l) { return l.dim(); }, law);
}

CharFn char_fn(const GaussianLaw& law)
{
    return CharFn(law.dim(), [law](const Vector& x) { return law.char_fn(x); });
}

CharFn char_fn(const CompoundPoissonLaw& law)
{
    return CharFn(law.dim(), [law](const Vector& x) { return law.char_fn(x); });
}

CharFn char_fn(const Law& law)
{
    return std::visit([](const auto& l) { return char_fn(l); }, law);
}

CharFn point_mass_char_fn(const Vector& c)
{
    return CharFn(static_cast<int>(c.size()), [c](const Vector& x) { return std::exp(kI * c.dot(x)); });
}

CharFn convolve_charfns(const CharFn& a, const CharFn& b)
{
    if (a.dim() != b.dim())
        throw DimensionMismatch("convolve_charfns: dimensions differ");
    return CharFn(a.dim(), [a, b](const Vector& x) { return a(x) * b(x); });
}

CharFn push_forward(const CharFn& mu, const Matrix& t)
{
    if (t.cols() != mu.dim())
        throw DimensionMismatch("push_forward: operator domain does not match the law");
    return CharFn(static_cast<int>(t.rows()), [mu, t](const Vector& x) { return mu(t.transpose() * x); });
}

SampleBatch sample_gaussian(const GaussianLaw& law, Rng& rng, std::size_t count)
{
    const auto n = static_cast<Eigen::Index>(count);
    const Eigen::Index r = law.rank();
    SampleBatch out = SampleBatch::Zero(n, law.dim());
    if (r == 0)
        return out;
    std::normal_distribution<double> normal;
    Vector z(r);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index i = 0; i < r; ++i)
            z(i) = normal(rng);
        out.row(k) = (law.factor() * z).transpose();
    }
    return out;
}

SampleBatch sample_compound_poisson(const CompoundPoissonLaw& law, Rng& rng, std::size_t count)
{
    const auto n = static_cast<Eigen::Index>(count);
    SampleBatch out(n, law.dim());
    const Vector drift = law.effective_drift();
    const AtomicLevyMeasure& levy = law.levy();
    std::vector<std::poisson_distribution<int>> counts;
    for (double w : levy.weights())
        counts.emplace_back(w);
    for (Eigen::Index k = 0; k < n; ++k) {
        Vector x = drift;
        for (std::size_t j = 0; j < counts.size(); ++j) {
            const int m = counts[j](rng);
            if (m != 0)
                x += m * levy.atom(j);
        }
        out.row(k) = x.transpose();
    }
    return out;
}

SampleBatch sample_gaussian(const GaussianLaw& law, std::uint64_t seed, std::size_t count, unsigned workers)
{
    SampleBatch out(static_cast<Eigen::Index>(count), law.dim());
    parallel_chunks(count, workers, seed, [&](Rng& rng, std::size_t begin, std::size_t end) {
        out.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin)) =
            sample_gaussian(law, rng, end - begin);
    });
    return out;
}

SampleBatch sample_compound_poisson(const CompoundPoissonLaw& law, std::uint64_t seed, std::size_t count,
                                    unsigned workers)
{
    SampleBatch out(static_cast<Eigen::Index>(count), law.dim());
    parallel_chunks(count, workers, seed, [&](Rng& rng, std::size_t begin, std::size_t end) {
        out.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin)) =
            sample_compound_poisson(law, rng, end - begin);
    });
    return out;
}

SampleBatch sample(const Law& law, std::uint64_t seed, std::size_t count, unsigned workers)
{
    if (const auto* g = std::get_if<GaussianLaw>(&law))
        return sample_gaussian(*g, seed, count, workers);
    return sample_compound_poisson(std::get<CompoundPoissonLaw>(law), seed, count, workers);
}

EmpiricalCharFn empirical_char_fn(const SampleBatch& samples, const Vector& functional)
{
    require_dim(functional, static_cast<int>(samples.cols()), "empirical_char_fn");
    const auto n = static_cast<std::size_t>(samples.rows());
    if (n == 0)
        throw std::invalid_argument("empirical_char_fn: empty batch");
    std::vector<double> phase(n);
    simd::dot_rows({samples.data(), static_cast<std::size_t>(samples.size())},
                   static_cast<std::size_t>(samples.cols()), {functional.data(), static_cast<std::size_t>(functional.size())}, phase);
    std::vector<double> re(n);
    std::vector<double> im(n);
    for (std::size_t k = 0; k < n; ++k) {
        re[k] = std::cos(phase[k]);
        im[k] = std::sin(phase[k]);
    }
    const simd::Moments mr = simd::moments(re);
    const simd::Moments mi = simd::moments(im);
    const double nn = static_cast<double>(n);
    auto se = [nn](const simd::Moments& m) {
        const double mean = m.sum / nn;
        const double var = std::max(0.0, (m.sum_sq - nn * mean * mean) / std::max(1.0, nn - 1.0));
        return std::sqrt(var / nn);
    };
    return {Complex(mr.sum / nn, mi.sum / nn), se(mr), se(mi)};
}

} // namespace skewq
