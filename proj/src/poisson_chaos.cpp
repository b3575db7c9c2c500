#include "skewq/poisson_chaos.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include "skewq/error.hpp"
#include "skewq/mehler.hpp"
#include "skewq/multiset.hpp"
#include "skewq/simd.hpp"

namespace skewq {

namespace {

constexpr Complex kI{0.0, 1.0};

// Integrands here grow polynomially in the counts, so the grid is cut much
// deeper than the plain 1e-14 used for bounded expectations.
constexpr double kMomentTail = 1e-30;

bool same_atoms(const AtomicLevyMeasure& a, const AtomicLevyMeasure& b)
{
    if (&a == &b)
        return true;
    if (a.size() != b.size() || a.dim() != b.dim())
        return false;
    for (std::size_t j = 0; j < a.size(); ++j)
        if (a.weight(j) != b.weight(j) || a.atom(j) != b.atom(j))
            return false;
    return true;
}

// Sum of p * f(counts) over the truncated grid.
Complex enumerate(const CountGrid& grid, const std::function<Complex(std::span<const int>)>& f)
{
    if (grid.size() > kMaxEnumeration)
        throw UnsupportedQuadrature("truncated Poisson grid has " + std::to_string(grid.size()) + " points");
    Complex total = 0.0;
    grid.for_each([&](std::span<const int> counts, double p) { total += p * f(counts); });
    return total;
}

// Charlier values C_k(N; w) for k = 0..n, scalar recurrence.
std::vector<double> charlier_all(int n, double a, double x)
{
    std::vector<double> c(static_cast<std::size_t>(n) + 1);
    c[0] = 1.0;
    if (n >= 1)
        c[1] = x - a;
    for (int k = 1; k < n; ++k)
        c[static_cast<std::size_t>(k) + 1] =
            (x - k - a) * c[static_cast<std::size_t>(k)] - k * a * c[static_cast<std::size_t>(k) - 1];
    return c;
}

Complex reconstruct_counts(const std::vector<SymFnTensor>& kernels, std::span<const int> counts)
{
    if (kernels.empty())
        return 0.0;
    const AtomicLevyMeasure& levy = kernels.front().levy();
    const std::size_t m = levy.size();
    const int top = static_cast<int>(kernels.size()) - 1;
    std::vector<std::vector<double>> c(m);
    for (std::size_t j = 0; j < m; ++j)
        c[j] = charlier_all(top, levy.weight(j), counts[j]);
    Complex s = 0.0;
    for (int n = 0; n <= top; ++n) {
        const SymFnTensor& t = kernels[static_cast<std::size_t>(n)];
        const MultisetIndex& idx = multiset_index(static_cast<int>(m), n);
        Complex in = 0.0;
        for (std::size_t a = 0; a < idx.size(); ++a) {
            if (t[a] == 0.0)
                continue;
            const auto e = idx.exponents(a);
            double v = idx.multiplicity(a);
            for (std::size_t j = 0; j < m; ++j)
                v *= c[j][static_cast<std::size_t>(e[j])];
            in += t[a] * v;
        }
        s += in / factorial(n);
    }
    return s;
}

} // namespace

ConfigFunction::ConfigFunction(Kind kind, std::shared_ptr<const AtomicLevyMeasure> levy,
                               std::function<Complex(std::span<const int>)> fn)
    : kind_(kind), levy_(std::move(levy)), fn_(std::move(fn))
{
    if (!levy_)
        throw ValidationError("ConfigFunction: missing Levy measure");
}

ConfigFunction ConfigFunction::linear_statistic(std::shared_ptr<const AtomicLevyMeasure> levy, std::vector<double> g)
{
    if (!levy || g.size() != levy->size())
        throw AtomSetMismatch("linear_statistic: one value per atom required");
    return ConfigFunction(Kind::linear_statistic, std::move(levy), [g = std::move(g)](std::span<const int> counts) {
        double s = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j)
            s += g[j] * counts[j];
        return Complex(s);
    });
}

ConfigFunction ConfigFunction::count_in(std::shared_ptr<const AtomicLevyMeasure> levy,
                                        const std::vector<std::size_t>& atoms)
{
    if (!levy)
        throw ValidationError("count_in: missing Levy measure");
    std::vector<double> g(levy->size(), 0.0);
    for (std::size_t j : atoms) {
        if (j >= g.size())
            throw AtomSetMismatch("count_in: atom index out of range");
        g[j] = 1.0;
    }
    return linear_statistic(std::move(levy), std::move(g));
}

ConfigFunction ConfigFunction::count_polynomial(std::shared_ptr<const AtomicLevyMeasure> levy, Polynomial p)
{
    if (!levy || static_cast<std::size_t>(p.dim()) != levy->size())
        throw AtomSetMismatch("count_polynomial: one variable per atom required");
    return ConfigFunction(Kind::count_polynomial, std::move(levy), [p = std::move(p)](std::span<const int> counts) {
        std::vector<double> x(counts.begin(), counts.end());
        return p(std::span<const double>(x));
    });
}

ConfigFunction ConfigFunction::pullback(const CompoundPoissonLaw& law, TestFunction f)
{
    if (f.dim() != law.dim())
        throw DimensionMismatch("pullback: function and law dimensions differ");
    return ConfigFunction(Kind::pullback, law.levy_ptr(),
                          [law, f = std::move(f)](std::span<const int> counts) { return f(law.realise(counts)); });
}

ConfigFunction ConfigFunction::callback(std::shared_ptr<const AtomicLevyMeasure> levy,
                                        std::function<Complex(std::span<const int>)> fn)
{
    return ConfigFunction(Kind::callback, std::move(levy), std::move(fn));
}

Complex ConfigFunction::evaluate(std::span<const int> counts) const
{
    if (counts.size() != levy_->size())
        throw AtomSetMismatch("ConfigFunction: one multiplicity per atom required");
    return fn_(counts);
}

Complex ConfigFunction::operator()(const PointConfiguration& eta) const
{
    if (!same_atoms(eta.levy(), *levy_))
        throw AtomSetMismatch("ConfigFunction: configuration lives on a different atom set");
    return fn_(eta.counts());
}

SymFnTensor::SymFnTensor(std::shared_ptr<const AtomicLevyMeasure> levy, int degree)
    : levy_(std::move(levy)), degree_(degree)
{
    if (!levy_ || degree < 0)
        throw ValidationError("SymFnTensor: missing measure or negative degree");
    values_.assign(multiset_count(static_cast<int>(levy_->size()), degree), 0.0);
}

SymFnTensor::SymFnTensor(std::shared_ptr<const AtomicLevyMeasure> levy, int degree, std::vector<Complex> values)
    : SymFnTensor(std::move(levy), degree)
{
    if (values.size() != values_.size())
        throw DimensionMismatch("SymFnTensor: one value per atom multiset required");
    values_ = std::move(values);
}

Complex SymFnTensor::at(std::span<const int> atoms) const
{
    if (atoms.size() != static_cast<std::size_t>(degree_))
        throw DimensionMismatch("SymFnTensor::at: wrong number of arguments");
    std::vector<int> sorted(atoms.begin(), atoms.end());
    std::sort(sorted.begin(), sorted.end());
    for (int a : sorted)
        if (a < 0 || static_cast<std::size_t>(a) >= levy_->size())
            throw AtomSetMismatch("SymFnTensor::at: atom index out of range");
    return values_[multiset_index(static_cast<int>(levy_->size()), degree_).rank_of_indices(sorted)];
}

Complex SymFnTensor::inner(const SymFnTensor& other) const
{
    if (!same_atoms(*levy_, *other.levy_) || other.degree_ != degree_)
        throw AtomSetMismatch("SymFnTensor::inner: kernels live on different atom sets");
    const MultisetIndex& idx = multiset_index(static_cast<int>(levy_->size()), degree_);
    Complex s = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
        double w = idx.multiplicity(a);
        const auto e = idx.exponents(a);
        for (std::size_t j = 0; j < e.size(); ++j)
            w *= std::pow(levy_->weight(j), e[j]);
        s += w * values_[a] * std::conj(other.values_[a]);
    }
    return s;
}

double SymFnTensor::norm() const
{
    return std::sqrt(std::max(0.0, inner(*this).real()));
}

SymFnTensor operator-(const SymFnTensor& a, const SymFnTensor& b)
{
    if (!same_atoms(a.levy(), b.levy()) || a.degree() != b.degree())
        throw AtomSetMismatch("SymFnTensor: subtracting kernels on different atom sets");
    std::vector<Complex> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = a[i] - b[i];
    return SymFnTensor(a.levy_ptr(), a.degree(), std::move(v));
}

double charlier(int n, double a, double x)
{
    if (n < 0)
        throw std::invalid_argument("charlier: negative degree");
    return charlier_all(n, a, x).back();
}

Complex difference_operator(const ConfigFunction& f, const PointConfiguration& eta, std::span<const std::size_t> atoms)
{
    const std::size_t n = atoms.size();
    if (n > 20)
        throw std::invalid_argument("difference_operator: order too large");
    for (std::size_t a : atoms)
        if (a >= eta.size())
            throw AtomSetMismatch("difference_operator: atom index out of range");
    std::vector<int> counts(eta.counts().begin(), eta.counts().end());
    Complex s = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> c = counts;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i))
                ++c[atoms[i]];
        const int sign = ((n - static_cast<std::size_t>(std::popcount(mask))) % 2 == 0) ? 1 : -1;
        s += static_cast<double>(sign) * f(PointConfiguration(eta.levy_ptr(), std::move(c)));
    }
    return s;
}

Complex tilde_difference(const TestFunction& g, const Vector& x, const std::vector<Vector>& points)
{
    const std::size_t n = points.size();
    if (n > 20)
        throw std::invalid_argument("tilde_difference: order too large");
    Complex s = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        Vector y = x;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i))
                y += points[i];
        const int sign = ((n - static_cast<std::size_t>(std::popcount(mask))) % 2 == 0) ? 1 : -1;
        s += static_cast<double>(sign) * g(y);
    }
    return s;
}

Complex expected_tilde_difference(const TestFunction& g, const CompoundPoissonLaw& mu, const std::vector<Vector>& points)
{
    for (const Vector& y : points)
        if (y.size() != mu.dim())
            throw DimensionMismatch("expected_tilde_difference: point has the wrong dimension");
    const CountGrid grid(mu.levy(), kMomentTail);
    return enumerate(grid, [&](std::span<const int> counts) { return tilde_difference(g, mu.realise(counts), points); });
}

std::vector<SymFnTensor> last_penrose_kernels(const ConfigFunction& f, int truncation, std::size_t mc_samples,
                                              std::uint64_t seed)
{
    if (truncation < 0)
        throw std::invalid_argument("last_penrose_kernels: negative truncation");
    const AtomicLevyMeasure& levy = f.levy();
    const int m = static_cast<int>(levy.size());
    const CountGrid grid(levy, kMomentTail);
    const bool exact = grid.size() <= kMaxEnumeration;
    std::vector<std::vector<int>> draws;
    if (!exact) {
        if (mc_samples == 0)
            throw UnsupportedQuadrature("truncated Poisson grid is too large and Monte Carlo is disabled");
        Rng rng(seed);
        for (std::size_t s = 0; s < mc_samples; ++s) {
            const PointConfiguration eta = sample_point_configuration(f.levy_ptr(), rng);
            draws.emplace_back(eta.counts().begin(), eta.counts().end());
        }
    }
    std::map<std::vector<int>, Complex> cache;
    std::vector<int> shifted(static_cast<std::size_t>(m));
    auto expectation_at = [&](const std::vector<int>& shift) -> Complex {
        auto it = cache.find(shift);
        if (it != cache.end())
            return it->second;
        auto eval = [&](std::span<const int> counts) {
            for (int j = 0; j < m; ++j)
                shifted[static_cast<std::size_t>(j)] = counts[static_cast<std::size_t>(j)] + shift[static_cast<std::size_t>(j)];
            return f.evaluate(shifted);
        };
        Complex e = 0.0;
        if (exact) {
            e = enumerate(grid, eval);
        } else {
            for (const auto& d : draws)
                e += eval(d);
            e /= static_cast<double>(draws.size());
        }
        cache.emplace(shift, e);
        return e;
    };
    std::vector<SymFnTensor> kernels;
    for (int n = 0; n <= truncation; ++n) {
        const MultisetIndex& idx = multiset_index(m, n);
        std::vector<Complex> values(idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a) {
            const auto atoms = idx.indices(a);
            Complex s = 0.0;
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                std::vector<int> shift(static_cast<std::size_t>(m), 0);
                for (int i = 0; i < n; ++i)
                    if (mask & (1u << i))
                        ++shift[static_cast<std::size_t>(atoms[static_cast<std::size_t>(i)])];
                const int sign = ((n - std::popcount(mask)) % 2 == 0) ? 1 : -1;
                s += static_cast<double>(sign) * expectation_at(shift);
            }
            values[a] = s;
        }
        kernels.emplace_back(f.levy_ptr(), n, std::move(values));
    }
    return kernels;
}

SymFnTensor last_penrose_tau(const ConfigFunction& f, int n)
{
    return last_penrose_kernels(f, n).back();
}

Complex poisson_multiple_integral(const SymFnTensor& t, const PointConfiguration& eta)
{
    if (!same_atoms(t.levy(), eta.levy()))
        throw AtomSetMismatch("poisson_multiple_integral: kernel and configuration use different atoms");
    const AtomicLevyMeasure& levy = t.levy();
    const std::size_t m = levy.size();
    const int n = t.degree();
    std::vector<std::vector<double>> c(m);
    for (std::size_t j = 0; j < m; ++j)
        c[j] = charlier_all(n, levy.weight(j), eta.count(j));
    const MultisetIndex& idx = multiset_index(static_cast<int>(m), n);
    Complex s = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
        const auto e = idx.exponents(a);
        double v = idx.multiplicity(a);
        for (std::size_t j = 0; j < m; ++j)
            v *= c[j][static_cast<std::size_t>(e[j])];
        s += t[a] * v;
    }
    return s;
}

Complex last_penrose_reconstruct(const std::vector<SymFnTensor>& kernels, const PointConfiguration& eta)
{
    if (!kernels.empty() && !same_atoms(kernels.front().levy(), eta.levy()))
        throw AtomSetMismatch("last_penrose_reconstruct: kernels and configuration use different atoms");
    return reconstruct_counts(kernels, eta.counts());
}

Complex last_penrose_reconstruct(const ConfigFunction& f, int truncation, const PointConfiguration& eta)
{
    return last_penrose_reconstruct(last_penrose_kernels(f, truncation), eta);
}

double last_penrose_l2_residual(const ConfigFunction& f, int truncation)
{
    const auto kernels = last_penrose_kernels(f, truncation);
    const CountGrid grid(f.levy(), kMomentTail);
    const Complex e = enumerate(grid, [&](std::span<const int> counts) {
        return Complex(std::norm(f.evaluate(counts) - reconstruct_counts(kernels, counts)));
    });
    return std::sqrt(std::max(0.0, e.real()));
}

PoissonIsometry last_penrose_isometry(const ConfigFunction& f, int truncation)
{
    const auto kernels = last_penrose_kernels(f, truncation);
    const CountGrid grid(f.levy(), kMomentTail);
    PoissonIsometry out;
    out.norm_squared = enumerate(grid, [&](std::span<const int> counts) { return Complex(std::norm(f.evaluate(counts))); }).real();
    for (std::size_t n = 0; n < kernels.size(); ++n) {
        const double nn = kernels[n].norm();
        out.chaos_squared += nn * nn / factorial(static_cast<int>(n));
    }
    return out;
}

PoissonIntegralIsometry poisson_isometry_check(const std::shared_ptr<const AtomicLevyMeasure>& levy, int max_degree)
{
    const int m = static_cast<int>(levy->size());
    const CountGrid grid(*levy, kMomentTail);
    if (grid.size() > kMaxEnumeration)
        throw UnsupportedQuadrature("poisson_isometry_check: grid too large");
    // table[j][k][N] = C_k(N; w_j) over the truncated support of atom j.
    std::vector<std::vector<std::vector<double>>> table(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const std::size_t kmax = grid.pmf(static_cast<std::size_t>(j)).size();
        std::vector<double> xs(kmax);
        for (std::size_t x = 0; x < kmax; ++x)
            xs[x] = static_cast<double>(x);
        auto& tj = table[static_cast<std::size_t>(j)];
        tj.assign(static_cast<std::size_t>(max_degree) + 1, std::vector<double>(kmax));
        for (int k = 0; k <= max_degree; ++k)
            simd::charlier(k, levy->weight(static_cast<std::size_t>(j)), xs, tj[static_cast<std::size_t>(k)]);
    }
    struct Basis {
        int degree;
        std::vector<int> exponents;
        double multiplicity;
        double expected;
    };
    std::vector<Basis> basis;
    for (int n = 0; n <= max_degree; ++n) {
        const MultisetIndex& idx = multiset_index(m, n);
        for (std::size_t a = 0; a < idx.size(); ++a) {
            const auto e = idx.exponents(a);
            double w = 1.0;
            for (int j = 0; j < m; ++j)
                w *= std::pow(levy->weight(static_cast<std::size_t>(j)), e[static_cast<std::size_t>(j)]);
            basis.push_back({n, std::vector<int>(e.begin(), e.end()), idx.multiplicity(a),
                             factorial(n) * idx.multiplicity(a) * w});
        }
    }
    const auto b = static_cast<Eigen::Index>(basis.size());
    Matrix gram = Matrix::Zero(b, b);
    Vector v(b);
    grid.for_each([&](std::span<const int> counts, double p) {
        for (Eigen::Index i = 0; i < b; ++i) {
            const Basis& bs = basis[static_cast<std::size_t>(i)];
            double val = bs.multiplicity;
            for (int j = 0; j < m; ++j)
                val *= table[static_cast<std::size_t>(j)][static_cast<std::size_t>(bs.exponents[static_cast<std::size_t>(j)])]
                            [static_cast<std::size_t>(counts[static_cast<std::size_t>(j)])];
            v(i) = val;
        }
        gram.noalias() += p * v * v.transpose();
    });
    PoissonIntegralIsometry res;
    for (Eigen::Index i = 0; i < b; ++i)
        for (Eigen::Index k = 0; k < b; ++k) {
            const Basis& bi = basis[static_cast<std::size_t>(i)];
            const Basis& bk = basis[static_cast<std::size_t>(k)];
            const double g = gram(i, k) / std::sqrt(bi.expected * bk.expected);
            if (bi.degree == bk.degree)
                res.isometry = std::max(res.isometry, std::abs(g - (i == k ? 1.0 : 0.0)));
            else
                res.orthogonality = std::max(res.orthogonality, std::abs(g));
        }
    return res;
}

Complex product_exponential(const std::vector<Vector>& points, const Vector& functional)
{
    Complex p = 1.0;
    for (const Vector& y : points)
        p *= std::exp(kI * y.dot(functional)) - 1.0;
    return p;
}

double verify_tilde_intertwine(const SkewTriple& triple, const TestFunction& f, const std::vector<Vector>& points)
{
    if (triple.is_gaussian())
        throw ValidationError("verify_tilde_intertwine needs a jump triple");
    std::vector<Vector> images;
    for (const Vector& y : points) {
        if (y.size() != triple.map.cols())
            throw DimensionMismatch("verify_tilde_intertwine: point has the wrong dimension");
        images.push_back(triple.map * y);
    }
    const Complex lhs = expected_tilde_difference(mehler_transform(triple, f), triple.jump_source(), points);
    const Complex rhs = expected_tilde_difference(f, triple.jump_target(), images);
    return std::abs(lhs - rhs);
}

SymFnTensor contract_kernel(const SymFnTensor& t, const Matrix& map,
                            const std::shared_ptr<const AtomicLevyMeasure>& source)
{
    const AtomicLevyMeasure& target = t.levy();
    if (map.rows() != target.dim() || map.cols() != source->dim())
        throw DimensionMismatch("contract_kernel: map does not connect the two atom sets");
    std::vector<int> image(source->size());
    for (std::size_t i = 0; i < source->size(); ++i) {
        const int k = target.find_atom(map * source->atom(i), kAtomSnapTolerance);
        if (k < 0)
            throw AtomMismatch("image of source atom " + std::to_string(i) + " is not a target atom");
        image[i] = k;
    }
    const int n = t.degree();
    const MultisetIndex& idx = multiset_index(static_cast<int>(source->size()), n);
    std::vector<Complex> values(idx.size());
    std::vector<int> args(static_cast<std::size_t>(n));
    for (std::size_t a = 0; a < idx.size(); ++a) {
        const auto ind = idx.indices(a);
        for (int i = 0; i < n; ++i)
            args[static_cast<std::size_t>(i)] = image[static_cast<std::size_t>(ind[static_cast<std::size_t>(i)])];
        values[a] = t.at(args);
    }
    return SymFnTensor(source, n, std::move(values));
}

double verify_poisson_diagram(const SkewTriple& triple, const TestFunction& f, int truncation)
{
    if (triple.is_gaussian())
        throw ValidationError("verify_poisson_diagram needs a jump triple");
    const CompoundPoissonLaw& mu1 = triple.jump_source();
    const CompoundPoissonLaw& mu2 = triple.jump_target();
    const auto left = last_penrose_kernels(ConfigFunction::pullback(mu1, mehler_transform(triple, f)), truncation);
    const auto right = last_penrose_kernels(ConfigFunction::pullback(mu2, f), truncation);
    double worst = 0.0;
    for (int n = 0; n <= truncation; ++n) {
        const auto i = static_cast<std::size_t>(n);
        worst = std::max(worst, (left[i] - contract_kernel(right[i], triple.map, mu1.levy_ptr())).norm());
    }
    return worst;
}

} // namespace skewq
