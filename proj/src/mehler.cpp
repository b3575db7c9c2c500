#include "skewq/mehler.hpp"

#include <cmath>
#include <set>
#include <string>

#include "skewq/error.hpp"
#include "skewq/point_configuration.hpp"
#include "skewq/quadrature.hpp"

namespace skewq {

namespace {

constexpr Complex kI{0.0, 1.0};

std::size_t grid_size(int nodes, int dim)
{
    std::size_t s = 1;
    for (int k = 0; k < dim; ++k) {
        if (s > kMaxEnumeration / static_cast<std::size_t>(nodes))
            return kMaxEnumeration + 1;
        s *= static_cast<std::size_t>(nodes);
    }
    return s;
}

// E exp(i b Z) on the default Gauss-Hermite rule.
Complex gh_phase(double b)
{
    const QuadratureRule& rule = gauss_hermite(kDefaultHermiteNodes);
    Complex s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        s += rule.weights[k] * std::exp(kI * b * rule.nodes[k]);
    return s;
}

// E exp(i<Y, theta>) for Y ~ law, by quadrature / truncated sums.
Complex law_phase(const Law& law, const Vector& theta)
{
    if (const auto* g = std::get_if<GaussianLaw>(&law)) {
        const Vector b = g->factor().transpose() * theta;
        Complex p = 1.0;
        for (Eigen::Index i = 0; i < b.size(); ++i)
            p *= gh_phase(b(i));
        return p;
    }
    const auto& cp = std::get<CompoundPoissonLaw>(law);
    Complex p = std::exp(kI * cp.effective_drift().dot(theta));
    const CountGrid grid(cp.levy());
    for (std::size_t j = 0; j < cp.levy().size(); ++j) {
        const Complex step = std::exp(kI * cp.levy().atom(j).dot(theta));
        Complex s = 0.0;
        Complex z = 1.0;
        for (double pk : grid.pmf(j)) {
            s += pk * z;
            z *= step;
        }
        p *= s;
    }
    return p;
}

// E f(center + Y) for Y ~ law. `poly_degree` >= 0 selects an exact
// low-order Gauss-Hermite grid for polynomial integrands.
Complex shifted_expectation(const Law& law, const Vector& center, const std::function<Complex(const Vector&)>& f,
                            int poly_degree)
{
    if (const auto* g = std::get_if<GaussianLaw>(&law)) {
        const int r = g->rank();
        const int nodes = poly_degree >= 0 ? std::max(1, (poly_degree + 2) / 2) : kDefaultHermiteNodes;
        if (poly_degree < 0 && r > kMaxTensorGridDim)
            throw UnsupportedQuadrature("Gaussian factor of rank " + std::to_string(r) +
                                        " exceeds the tensor-grid limit of " + std::to_string(kMaxTensorGridDim));
        if (grid_size(nodes, r) > kMaxEnumeration)
            throw UnsupportedQuadrature("tensor grid of " + std::to_string(nodes) + "^" + std::to_string(r) +
                                        " nodes is too large");
        const Matrix& l = g->factor();
        Vector y(center.size());
        return gaussian_expectation(r, nodes, [&](std::span<const double> z) {
            y = center;
            for (int i = 0; i < r; ++i)
                y += z[static_cast<std::size_t>(i)] * l.col(i);
            return f(y);
        });
    }
    const auto& cp = std::get<CompoundPoissonLaw>(law);
    const CountGrid grid(cp.levy());
    if (grid.size() > kMaxEnumeration)
        throw UnsupportedQuadrature("truncated Poisson grid has " + std::to_string(grid.size()) + " points");
    const Vector base = center + cp.effective_drift();
    Complex total = 0.0;
    Vector y(base.size());
    grid.for_each([&](std::span<const int> counts, double p) {
        y = base;
        for (std::size_t j = 0; j < counts.size(); ++j)
            if (counts[j] != 0)
                y += counts[j] * cp.levy().atom(j);
        total += p * f(y);
    });
    return total;
}

Complex normal_product_moment(std::span<const int> e)
{
    double m = 1.0;
    for (int k : e)
        m *= normal_moment(k);
    return m;
}

// Moments E Y^gamma of a compound Poisson law for the exponents in `needed`.
std::map<Polynomial::Exponents, Complex> jump_moments(const CompoundPoissonLaw& law,
                                                      const std::set<Polynomial::Exponents>& needed)
{
    std::map<Polynomial::Exponents, Complex> out;
    for (const auto& e : needed)
        out[e] = 0.0;
    const CountGrid grid(law.levy());
    if (grid.size() > kMaxEnumeration)
        throw UnsupportedQuadrature("truncated Poisson grid is too large for moment enumeration");
    grid.for_each([&](std::span<const int> counts, double p) {
        const Vector y = law.realise(counts);
        for (auto& [e, acc] : out) {
            double m = 1.0;
            for (std::size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k)
                    m *= y(static_cast<Eigen::Index>(i));
            acc += p * m;
        }
    });
    return out;
}

// Integrates out the trailing variables of q, which stand for a draw of `law`
// (Gaussian: standard normal coordinates of its factor; jump: the point itself).
Polynomial integrate_law(const Polynomial& q, int keep, const Law& law)
{
    if (std::holds_alternative<GaussianLaw>(law))
        return q.integrate_trailing(keep, normal_product_moment);
    std::set<Polynomial::Exponents> needed;
    for (const auto& [e, c] : q.terms())
        needed.emplace(e.begin() + keep, e.end());
    const auto moments = jump_moments(std::get<CompoundPoissonLaw>(law), needed);
    return q.integrate_trailing(keep, [&](std::span<const int> e) {
        return moments.at(Polynomial::Exponents(e.begin(), e.end()));
    });
}

// Linear map from the variables that represent a draw of `law` to the point.
Matrix draw_map(const Law& law)
{
    if (const auto* g = std::get_if<GaussianLaw>(&law))
        return g->factor();
    return Matrix::Identity(law_dim(law), law_dim(law));
}

Complex polynomial_expectation(const Polynomial& p, const Law& law)
{
    const Matrix a = draw_map(law);
    const Polynomial q = p.compose(a, Vector::Zero(p.dim()));
    const Polynomial c = integrate_law(q, 0, law);
    return c(std::span<const double>{});
}

Polynomial transform_polynomial(const Matrix& t, const Law& rho, const Polynomial& p)
{
    const Matrix draw = draw_map(rho);
    Matrix a(t.rows(), t.cols() + draw.cols());
    a << t, draw;
    const Polynomial q = p.compose(a, Vector::Zero(p.dim()));
    return integrate_law(q, static_cast<int>(t.cols()), rho);
}

void check_triple_function(const SkewTriple& triple, const TestFunction& f)
{
    if (f.dim() != triple.map.rows())
        throw DimensionMismatch("test function lives on R^" + std::to_string(f.dim()) +
                                " but the skew map targets R^" + std::to_string(triple.map.rows()));
}

NormEstimate lp_norm_estimate(const std::vector<double>& values, double p)
{
    const double n = static_cast<double>(values.size());
    double s = 0.0;
    double s2 = 0.0;
    for (double v : values) {
        s += v;
        s2 += v * v;
    }
    const double mean = s / n;
    const double var = std::max(0.0, (s2 - n * mean * mean) / std::max(1.0, n - 1.0));
    const double se_mean = std::sqrt(var / n);
    if (mean <= 0.0)
        return {0.0, 0.0};
    const double norm = std::pow(mean, 1.0 / p);
    return {norm, norm / (p * mean) * se_mean};
}

} // namespace

Estimate mehler_apply(const SkewTriple& triple, const TestFunction& f, const Vector& x, const EvaluationMethod& method)
{
    check_triple_function(triple, f);
    if (x.size() != triple.map.cols())
        throw DimensionMismatch("mehler_apply: point has the wrong dimension");
    const Vector center = triple.map * x;
    if (const auto* mc = std::get_if<MonteCarloMethod>(&method)) {
        if (mc->samples < 2)
            throw ValidationError("mehler_apply: Monte Carlo needs at least two samples");
        const SampleBatch ys = sample(triple.factor, mc->seed, mc->samples, mc->workers);
        Complex s = 0.0;
        double s2 = 0.0;
        for (Eigen::Index k = 0; k < ys.rows(); ++k) {
            const Complex v = f(center + ys.row(k).transpose());
            s += v;
            s2 += std::norm(v);
        }
        const double n = static_cast<double>(ys.rows());
        const Complex mean = s / n;
        const double var = std::max(0.0, (s2 - n * std::norm(mean)) / (n - 1.0));
        return {mean, std::sqrt(var / n)};
    }
    switch (f.kind()) {
    case TestFunction::Kind::trigonometric: {
        Complex sum = 0.0;
        for (std::size_t k = 0; k < f.coefficients().size(); ++k) {
            const Vector& theta = f.frequencies()[k];
            sum += f.coefficients()[k] * std::exp(kI * center.dot(theta)) * law_phase(triple.factor, theta);
        }
        return {sum, 0.0};
    }
    case TestFunction::Kind::polynomial:
        return {shifted_expectation(triple.factor, center, [&](const Vector& y) { return f(y); }, f.degree()), 0.0};
    case TestFunction::Kind::callback:
        return {shifted_expectation(triple.factor, center, [&](const Vector& y) { return f(y); }, -1), 0.0};
    }
    return {};
}

TestFunction mehler_transform(const SkewTriple& triple, const TestFunction& f)
{
    check_triple_function(triple, f);
    switch (f.kind()) {
    case TestFunction::Kind::polynomial:
        return TestFunction::from_polynomial(transform_polynomial(triple.map, triple.factor, f.polynomial()));
    case TestFunction::Kind::trigonometric: {
        std::vector<Complex> coeffs;
        std::vector<Vector> freqs;
        for (std::size_t k = 0; k < f.coefficients().size(); ++k) {
            const Vector& theta = f.frequencies()[k];
            coeffs.push_back(f.coefficients()[k] * law_phase(triple.factor, theta));
            freqs.push_back(triple.map.transpose() * theta);
        }
        return TestFunction::trigonometric(static_cast<int>(triple.map.cols()), std::move(coeffs), std::move(freqs));
    }
    case TestFunction::Kind::callback:
        break;
    }
    return TestFunction::callback(static_cast<int>(triple.map.cols()),
                                  [triple, f](const Vector& x) { return mehler_apply(triple, f, x).value; });
}

TestFunction mehler_transform(const Matrix& t, const CharFn& rho, const TestFunction& f)
{
    if (f.kind() != TestFunction::Kind::trigonometric)
        throw UnsupportedQuadrature("a factor given by its characteristic function only acts on trigonometric sums");
    if (t.rows() != f.dim() || rho.dim() != f.dim())
        throw DimensionMismatch("mehler_transform: dimensions of map, factor and function differ");
    std::vector<Complex> coeffs;
    std::vector<Vector> freqs;
    for (std::size_t k = 0; k < f.coefficients().size(); ++k) {
        coeffs.push_back(f.coefficients()[k] * rho(f.frequencies()[k]));
        freqs.push_back(t.transpose() * f.frequencies()[k]);
    }
    return TestFunction::trigonometric(static_cast<int>(t.cols()), std::move(coeffs), std::move(freqs));
}

Complex expectation(const TestFunction& f, const Law& law)
{
    if (f.dim() != law_dim(law))
        throw DimensionMismatch("expectation: function and law dimensions differ");
    switch (f.kind()) {
    case TestFunction::Kind::polynomial:
        return polynomial_expectation(f.polynomial(), law);
    case TestFunction::Kind::trigonometric: {
        const CharFn phi = char_fn(law);
        Complex s = 0.0;
        for (std::size_t k = 0; k < f.coefficients().size(); ++k)
            s += f.coefficients()[k] * phi(f.frequencies()[k]);
        return s;
    }
    case TestFunction::Kind::callback:
        break;
    }
    return shifted_expectation(law, Vector::Zero(f.dim()), [&](const Vector& y) { return f(y); }, -1);
}

double l2_norm(const TestFunction& f, const Law& law)
{
    switch (f.kind()) {
    case TestFunction::Kind::polynomial: {
        const Polynomial sq = f.polynomial() * f.polynomial().conjugate();
        return std::sqrt(std::max(0.0, polynomial_expectation(sq, law).real()));
    }
    case TestFunction::Kind::trigonometric: {
        const CharFn phi = char_fn(law);
        double s = 0.0;
        const auto& a = f.coefficients();
        const auto& th = f.frequencies();
        for (std::size_t k = 0; k < a.size(); ++k)
            for (std::size_t l = 0; l < a.size(); ++l)
                s += (a[k] * std::conj(a[l]) * phi(th[k] - th[l])).real();
        return std::sqrt(std::max(0.0, s));
    }
    case TestFunction::Kind::callback:
        break;
    }
    const TestFunction sq = TestFunction::callback(f.dim(), [f](const Vector& x) { return Complex(std::norm(f(x))); });
    return std::sqrt(std::max(0.0, expectation(sq, law).real()));
}

bool ContractionCheck::holds(double sigmas) const
{
    const double se = std::sqrt(lhs.std_error * lhs.std_error + rhs.std_error * rhs.std_error);
    return lhs.value <= rhs.value + sigmas * se;
}

ContractionCheck mehler_contraction_residual(const SkewTriple& triple, const TestFunction& f, double p,
                                             std::size_t samples, std::uint64_t seed, unsigned workers)
{
    if (!(p >= 1.0) || !std::isfinite(p))
        throw ValidationError("mehler_contraction_residual: p must lie in [1, inf)");
    if (samples < 2)
        throw ValidationError("mehler_contraction_residual: need at least two samples");
    const TestFunction g = mehler_transform(triple, f);
    const SampleBatch x1 = sample(triple.source, derive_seed(seed, 0), samples, workers);
    const SampleBatch x2 = sample(triple.target, derive_seed(seed, 1), samples, workers);
    std::vector<double> v1(samples);
    std::vector<double> v2(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const auto row = static_cast<Eigen::Index>(k);
        v1[k] = std::pow(std::abs(g(x1.row(row).transpose())), p);
        v2[k] = std::pow(std::abs(f(x2.row(row).transpose())), p);
    }
    return {lp_norm_estimate(v1, p), lp_norm_estimate(v2, p)};
}

double gaussian_exp_martingale_norm_ratio(const SkewTriple& triple, const Vector& functional)
{
    const Matrix& q1 = triple.gaussian_source().covariance();
    const Matrix& q2 = triple.gaussian_target().covariance();
    const Vector pulled = triple.map.transpose() * functional;
    return std::exp(0.5 * (pulled.dot(q1 * pulled) - functional.dot(q2 * functional)));
}

double verify_identityPTK(const SkewTriple& triple, const Vector& functional, const std::vector<Vector>& probes)
{
    const TestFunction k2 = exp_martingale(triple.target, functional).as_function();
    const ExpMartingaleVector k1 = exp_martingale(triple.source, triple.map.transpose() * functional);
    double worst = 0.0;
    for (const Vector& x : probes)
        worst = std::max(worst, std::abs(mehler_apply(triple, k2, x).value - k1(x)));
    return worst;
}

GramCertificate gram_independence(const CharFn& mu, const std::vector<Vector>& functionals)
{
    const auto n = static_cast<Eigen::Index>(functionals.size());
    ComplexMatrix g(n, n);
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index k = 0; k < n; ++k)
            g(m, k) = mu(functionals[static_cast<std::size_t>(m)] - functionals[static_cast<std::size_t>(k)]);
    GramCertificate cert{g, 0.0};
    if (n > 0) {
        const ComplexMatrix h = 0.5 * (g + g.adjoint());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
        cert.min_eigenvalue = solver.eigenvalues().minCoeff();
    }
    return cert;
}

} // namespace skewq
