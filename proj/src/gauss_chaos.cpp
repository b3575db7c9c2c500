#include "skewq/gauss_chaos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "skewq/error.hpp"
#include "skewq/hermite.hpp"
#include "skewq/multiset.hpp"
#include "skewq/quadrature.hpp"

namespace skewq {

namespace {

constexpr Complex kI{0.0, 1.0};

// E Z^m exp(a Z), Z standard normal.
Complex moment_exp(int m, Complex a)
{
    if (a == 0.0)
        return normal_moment(m);
    const QuadratureRule& rule = gauss_hermite(kDefaultHermiteNodes);
    Complex s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double z = rule.nodes[k];
        s += rule.weights[k] * std::pow(z, m) * std::exp(a * z);
    }
    return s;
}

ComplexSymTensor tensor_from_values(int dim, int degree, const std::vector<Complex>& values)
{
    std::vector<double> re(values.size());
    std::vector<double> im(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        re[i] = values[i].real();
        im[i] = values[i].imag();
    }
    return {SymTensor(dim, degree, std::move(re)), SymTensor(dim, degree, std::move(im))};
}

// Nodes per axis that integrate the outer function's partials exactly
// (polynomials) or to working precision (exponential classes).
int nodes_for(const OuterFunction& g, int extra_degree = 0)
{
    if (g.is_polynomial())
        return std::max(1, (g.max_power() + extra_degree) / 2 + 1);
    return kDefaultHermiteNodes;
}

void check_grid(int nodes, int dim)
{
    if (nodes == kDefaultHermiteNodes && dim > kMaxTensorGridDim)
        throw UnsupportedQuadrature("active dimension " + std::to_string(dim) + " exceeds the tensor-grid limit");
    double size = std::pow(static_cast<double>(nodes), dim);
    if (size > 2.0e7)
        throw UnsupportedQuadrature("tensor grid of " + std::to_string(nodes) + "^" + std::to_string(dim) +
                                    " points is too large");
}

void require_same_law(const GaussianLaw& a, const GaussianLaw& b, const char* what)
{
    if (a.dim() != b.dim() || max_abs(a.covariance() - b.covariance()) > 1e-12)
        throw ValidationError(std::string(what) + ": cylindrical function is defined for a different law");
}

// j^+ applied to every column of a.
Matrix whiten_columns(const GaussianLaw& law, const Matrix& a)
{
    Matrix out(law.rank(), a.cols());
    for (Eigen::Index c = 0; c < a.cols(); ++c)
        out.col(c) = law.whiten(a.col(c));
    return out;
}

// Square-root factor (k x k') of a PSD matrix built from products.
Matrix psd_factor(const Matrix& c)
{
    if (c.rows() == 0)
        return Matrix(0, 0);
    return GaussianLaw(clip_to_psd(symmetrized(c))).factor();
}

} // namespace

OuterFunction::OuterFunction(int arity) : arity_(arity)
{
    if (arity < 0)
        throw std::invalid_argument("OuterFunction: negative arity");
}

OuterFunction OuterFunction::constant(int arity, Complex value)
{
    OuterFunction g(arity);
    g.add_term({value, std::vector<int>(static_cast<std::size_t>(arity), 0), ComplexVector::Zero(arity)});
    return g;
}

OuterFunction OuterFunction::from_polynomial(const Polynomial& p)
{
    OuterFunction g(p.dim());
    for (const auto& [e, c] : p.terms())
        g.add_term({c, e, ComplexVector::Zero(p.dim())});
    return g;
}

OuterFunction OuterFunction::exponential(ComplexVector rate, Complex coeff)
{
    const int k = static_cast<int>(rate.size());
    OuterFunction g(k);
    g.add_term({coeff, std::vector<int>(static_cast<std::size_t>(k), 0), std::move(rate)});
    return g;
}

void OuterFunction::add_term(ExpPolyTerm term)
{
    if (term.powers.size() != static_cast<std::size_t>(arity_) || term.rate.size() != arity_)
        throw DimensionMismatch("OuterFunction: term arity mismatch");
    if (term.coeff == 0.0)
        return;
    for (auto& t : terms_)
        if (t.powers == term.powers && t.rate == term.rate) {
            t.coeff += term.coeff;
            return;
        }
    terms_.push_back(std::move(term));
}

bool OuterFunction::is_polynomial() const
{
    return std::all_of(terms_.begin(), terms_.end(), [](const ExpPolyTerm& t) { return t.rate.isZero(0.0); });
}

int OuterFunction::max_power() const
{
    int m = 0;
    for (const auto& t : terms_)
        m = std::max(m, std::accumulate(t.powers.begin(), t.powers.end(), 0));
    return m;
}

Complex OuterFunction::operator()(std::span<const double> u) const
{
    if (u.size() != static_cast<std::size_t>(arity_))
        throw DimensionMismatch("OuterFunction: argument has the wrong arity");
    Complex s = 0.0;
    for (const auto& t : terms_) {
        Complex v = t.coeff;
        Complex expo = 0.0;
        for (int i = 0; i < arity_; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            for (int k = 0; k < t.powers[ui]; ++k)
                v *= u[ui];
            expo += t.rate(i) * u[ui];
        }
        s += v * std::exp(expo);
    }
    return s;
}

OuterFunction OuterFunction::derivative(int axis) const
{
    if (axis < 0 || axis >= arity_)
        throw std::out_of_range("OuterFunction::derivative: axis");
    const auto a = static_cast<std::size_t>(axis);
    OuterFunction d(arity_);
    for (const auto& t : terms_) {
        if (t.powers[a] > 0) {
            ExpPolyTerm lowered = t;
            lowered.coeff *= static_cast<double>(t.powers[a]);
            --lowered.powers[a];
            d.add_term(std::move(lowered));
        }
        if (t.rate(axis) != 0.0) {
            ExpPolyTerm same = t;
            same.coeff *= t.rate(axis);
            d.add_term(std::move(same));
        }
    }
    return d;
}

std::vector<std::vector<OuterFunction>> OuterFunction::partial_levels(int max_order) const
{
    std::vector<std::vector<OuterFunction>> levels;
    levels.push_back({*this});
    for (int n = 1; n <= max_order; ++n) {
        const MultisetIndex& idx = multiset_index(arity_, n);
        const MultisetIndex& prev = multiset_index(arity_, n - 1);
        std::vector<OuterFunction> level;
        level.reserve(idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r) {
            const auto ind = idx.indices(r);
            const std::size_t parent = prev.rank_of_indices(ind.first(ind.size() - 1));
            level.push_back(levels.back()[parent].derivative(ind.back()));
        }
        levels.push_back(std::move(level));
    }
    return levels;
}

Complex OuterFunction::standard_expectation() const
{
    Complex s = 0.0;
    for (const auto& t : terms_) {
        Complex v = t.coeff;
        for (int i = 0; i < arity_; ++i)
            v *= moment_exp(t.powers[static_cast<std::size_t>(i)], t.rate(i));
        s += v;
    }
    return s;
}

CylindricalFunction::CylindricalFunction(GaussianLaw law, Matrix directions, OuterFunction outer)
    : law_(std::move(law)), directions_(std::move(directions)), outer_(std::move(outer))
{
    if (directions_.rows() != law_.rank())
        throw InconsistentDirection("directions have " + std::to_string(directions_.rows()) +
                                    " coordinates but the Cameron-Martin space has dimension " +
                                    std::to_string(law_.rank()));
    if (directions_.cols() != outer_.arity())
        throw DimensionMismatch("CylindricalFunction: outer function arity differs from the number of directions");
    const Matrix gram = directions_.transpose() * directions_;
    if (gram.size() > 0 && max_abs(gram - Matrix::Identity(gram.rows(), gram.cols())) > 1e-12)
        throw ValidationError("CylindricalFunction: directions are not orthonormal");
}

CylindricalFunction CylindricalFunction::exponential_vector(const GaussianLaw& law, const Vector& h)
{
    phi_functional(h, law);
    const double n = h.norm();
    if (n == 0.0)
        return CylindricalFunction(law, Matrix::Identity(law.rank(), 1), OuterFunction::constant(1, 1.0));
    ComplexVector rate(1);
    rate(0) = n;
    return CylindricalFunction(law, h / n, OuterFunction::exponential(rate, std::exp(-0.5 * n * n)));
}

CylindricalFunction CylindricalFunction::linear(const GaussianLaw& law, const Vector& h)
{
    phi_functional(h, law);
    const double n = h.norm();
    if (n == 0.0)
        return CylindricalFunction(law, Matrix::Identity(law.rank(), 1), OuterFunction(1));
    Polynomial p(1);
    p.add_term({1}, n);
    return CylindricalFunction(law, h / n, OuterFunction::from_polynomial(p));
}

CylindricalFunction CylindricalFunction::exp_martingale(const GaussianLaw& law, const Vector& functional)
{
    const Vector h = law.rkhs_image(functional);
    const double n = h.norm();
    if (n == 0.0)
        return CylindricalFunction(law, Matrix::Identity(law.rank(), 1), OuterFunction::constant(1, 1.0));
    ComplexVector rate(1);
    rate(0) = kI * n;
    return CylindricalFunction(law, h / n, OuterFunction::exponential(rate, std::exp(0.5 * n * n)));
}

CylindricalFunction CylindricalFunction::polynomial(const GaussianLaw& law, const Matrix& directions,
                                                    const Polynomial& p)
{
    return CylindricalFunction(law, directions, OuterFunction::from_polynomial(p));
}

Vector CylindricalFunction::coordinates(const Vector& x) const
{
    return directions_.transpose() * law_.whiten(x);
}

Complex CylindricalFunction::operator()(const Vector& x) const
{
    const Vector u = coordinates(x);
    return outer_(std::span<const double>(u.data(), static_cast<std::size_t>(u.size())));
}

double ComplexSymTensor::norm() const
{
    const double a = re.norm();
    const double b = im.norm();
    return std::sqrt(a * a + b * b);
}

ComplexSymTensor operator-(const ComplexSymTensor& a, const ComplexSymTensor& b)
{
    return {a.re - b.re, a.im - b.im};
}

ComplexSymTensor lift_map(const Matrix& a, const ComplexSymTensor& t)
{
    return {lift_map(a, t.re), lift_map(a, t.im)};
}

Complex contract_directions(const ComplexSymTensor& t, const std::vector<Vector>& directions)
{
    const int n = static_cast<int>(directions.size());
    if (n != t.re.degree())
        throw DimensionMismatch("contract_directions: need one direction per tensor factor");
    const int d = t.re.dim();
    for (const Vector& h : directions)
        if (h.size() != d)
            throw InconsistentDirection("contract_directions: direction has the wrong dimension");
    DenseTensor dense(d, n);
    std::vector<int> index(static_cast<std::size_t>(n), 0);
    auto data = dense.data();
    for (std::size_t off = 0; off < data.size(); ++off) {
        double v = 1.0;
        for (int k = 0; k < n; ++k)
            v *= directions[static_cast<std::size_t>(k)](index[static_cast<std::size_t>(k)]);
        data[off] = v;
        for (int k = n - 1; k >= 0; --k) {
            if (++index[static_cast<std::size_t>(k)] < d)
                break;
            index[static_cast<std::size_t>(k)] = 0;
        }
    }
    const SymTensor s = symmetrize(dense);
    return {inner(t.re, s), inner(t.im, s)};
}

FockVector ChaosCoefficients::real_part() const
{
    std::vector<SymTensor> c;
    for (const auto& t : components)
        c.push_back(t.re);
    return FockVector(std::move(c));
}

FockVector ChaosCoefficients::imag_part() const
{
    std::vector<SymTensor> c;
    for (const auto& t : components)
        c.push_back(t.im);
    return FockVector(std::move(c));
}

Vector phi_functional(const Vector& h, const GaussianLaw& law)
{
    return law.functional_for(h);
}

double phi(const Vector& h, const Vector& x, const GaussianLaw& law)
{
    return x.dot(phi_functional(h, law));
}

std::function<ComplexSymTensor(const Vector&)> malliavin_derivative(const CylindricalFunction& f, int n)
{
    if (n < 0)
        throw std::invalid_argument("malliavin_derivative: negative order");
    const int k = f.arity();
    auto level = std::make_shared<const std::vector<OuterFunction>>(f.outer().partial_levels(n).back());
    return [f, level, k, n](const Vector& x) {
        const Vector u = f.coordinates(x);
        const std::span<const double> us(u.data(), static_cast<std::size_t>(u.size()));
        const MultisetIndex& idx = multiset_index(k, n);
        std::vector<Complex> values(idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r)
            values[r] = idx.multiplicity(r) * (*level)[r](us);
        return lift_map(f.directions(), tensor_from_values(k, n, values));
    };
}

ChaosCoefficients stroock_coefficients(const CylindricalFunction& f, int truncation)
{
    if (truncation < 0)
        throw std::invalid_argument("stroock_coefficients: negative truncation");
    const int k = f.arity();
    const auto levels = f.outer().partial_levels(truncation);
    ChaosCoefficients c;
    for (int n = 0; n <= truncation; ++n) {
        const MultisetIndex& idx = multiset_index(k, n);
        std::vector<Complex> values(idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r)
            values[r] = idx.multiplicity(r) * levels[static_cast<std::size_t>(n)][r].standard_expectation();
        c.components.push_back(lift_map(f.directions(), tensor_from_values(k, n, values)));
    }
    return c;
}

double multiple_integral(const SymTensor& t, const GaussianLaw& law, const Vector& x)
{
    const int r = law.rank();
    if (t.dim() != r)
        throw InconsistentDirection("tensor has dimension " + std::to_string(t.dim()) +
                                    " but the Cameron-Martin space has dimension " + std::to_string(r));
    const int n = t.degree();
    const Vector u = law.whiten(x);
    std::vector<std::vector<double>> he(static_cast<std::size_t>(r));
    for (int j = 0; j < r; ++j)
        he[static_cast<std::size_t>(j)] = hermite_all(n, u(j));
    const MultisetIndex& idx = multiset_index(r, n);
    double s = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
        if (t[a] == 0.0)
            continue;
        const auto e = idx.exponents(a);
        double v = t[a];
        for (int j = 0; j < r; ++j)
            v *= he[static_cast<std::size_t>(j)][static_cast<std::size_t>(e[static_cast<std::size_t>(j)])];
        s += v;
    }
    return s;
}

Complex chaos_evaluate(const ChaosCoefficients& c, const GaussianLaw& law, const Vector& x)
{
    Complex s = 0.0;
    for (int n = 0; n <= c.truncation(); ++n) {
        const auto& t = c.components[static_cast<std::size_t>(n)];
        s += Complex(multiple_integral(t.re, law, x), multiple_integral(t.im, law, x)) / factorial(n);
    }
    return s;
}

Complex stroock_reconstruct(const CylindricalFunction& f, int truncation, const Vector& x)
{
    return chaos_evaluate(stroock_coefficients(f, truncation), f.law(), x);
}

double stroock_l2_residual(const CylindricalFunction& f, int truncation)
{
    const ChaosCoefficients c = stroock_coefficients(f, truncation);
    const int k = f.arity();
    const int nodes = f.outer().is_polynomial() ? f.outer().max_power() + 1 : kDefaultHermiteNodes;
    check_grid(nodes, k);
    const Matrix embed = f.law().factor() * f.directions();
    Vector x(f.law().dim());
    const Complex e = gaussian_expectation(k, nodes, [&](std::span<const double> u) {
        x = embed * Eigen::Map<const Vector>(u.data(), static_cast<Eigen::Index>(u.size()));
        return Complex(std::norm(f(x) - chaos_evaluate(c, f.law(), x)));
    });
    return std::sqrt(std::max(0.0, e.real()));
}

Complex mehler_apply(const SkewTriple& triple, const CylindricalFunction& f, const Vector& x)
{
    if (!triple.is_gaussian())
        throw ValidationError("cylindrical mehler_apply needs a Gaussian triple");
    const GaussianLaw& mu2 = triple.gaussian_target();
    require_same_law(f.law(), mu2, "mehler_apply");
    if (x.size() != triple.map.cols())
        throw DimensionMismatch("mehler_apply: point has the wrong dimension");
    const Matrix& h = f.directions();
    const Vector center = h.transpose() * mu2.whiten(triple.map * x);
    const Matrix a = h.transpose() * whiten_columns(mu2, triple.gaussian_factor().factor());
    const Matrix lw = psd_factor(a * a.transpose());
    const int kk = static_cast<int>(lw.cols());
    const int nodes = nodes_for(f.outer());
    check_grid(nodes, kk);
    Vector v(center.size());
    return gaussian_expectation(kk, nodes, [&](std::span<const double> z) {
        v = center;
        for (int i = 0; i < kk; ++i)
            v += z[static_cast<std::size_t>(i)] * lw.col(i);
        return f.outer()(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
    });
}

ChaosCoefficients transported_derivatives(const SkewTriple& triple, const CylindricalFunction& f, int truncation)
{
    if (!triple.is_gaussian())
        throw ValidationError("transported_derivatives needs a Gaussian triple");
    const GaussianLaw& mu1 = triple.gaussian_source();
    const GaussianLaw& mu2 = triple.gaussian_target();
    require_same_law(f.law(), mu2, "transported_derivatives");
    const Matrix& h = f.directions();
    const int k = f.arity();
    const Matrix m = restrict_to_rkhs(triple.map, mu1, mu2);
    const Matrix b = h.transpose() * m;
    const Matrix a = h.transpose() * whiten_columns(mu2, triple.gaussian_factor().factor());
    const Matrix lc = psd_factor(b * b.transpose() + a * a.transpose());
    const int kk = static_cast<int>(lc.cols());
    const int nodes = nodes_for(f.outer());
    check_grid(nodes, kk);

    const auto levels = f.outer().partial_levels(truncation);
    std::vector<std::vector<Complex>> sums(levels.size());
    for (std::size_t n = 0; n < levels.size(); ++n)
        sums[n].assign(levels[n].size(), 0.0);
    Vector v(k);
    for_each_grid_point(kk, nodes, [&](std::span<const double> z, double w) {
        v.setZero();
        for (int i = 0; i < kk; ++i)
            v += z[static_cast<std::size_t>(i)] * lc.col(i);
        const std::span<const double> vs(v.data(), static_cast<std::size_t>(k));
        for (std::size_t n = 0; n < levels.size(); ++n)
            for (std::size_t r = 0; r < levels[n].size(); ++r)
                sums[n][r] += w * levels[n][r](vs);
    });
    ChaosCoefficients out;
    const Matrix bt = b.transpose();
    for (int n = 0; n <= truncation; ++n) {
        const MultisetIndex& idx = multiset_index(k, n);
        std::vector<Complex> values(idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r)
            values[r] = idx.multiplicity(r) * sums[static_cast<std::size_t>(n)][r];
        out.components.push_back(lift_map(bt, tensor_from_values(k, n, values)));
    }
    return out;
}

ChaosCoefficients second_quantised(const SkewTriple& triple, const ChaosCoefficients& coeffs)
{
    const Matrix m = restrict_to_rkhs(triple.map, triple.gaussian_source(), triple.gaussian_target());
    const Matrix mt = m.transpose();
    ChaosCoefficients out;
    for (const auto& c : coeffs.components)
        out.components.push_back(lift_map(mt, c));
    return out;
}

double verify_derivative_intertwine(const SkewTriple& triple, const CylindricalFunction& f,
                                    const std::vector<Vector>& directions)
{
    const int n = static_cast<int>(directions.size());
    const Matrix m = restrict_to_rkhs(triple.map, triple.gaussian_source(), triple.gaussian_target());
    std::vector<Vector> pushed;
    for (const Vector& hd : directions) {
        if (hd.size() != m.cols())
            throw InconsistentDirection("direction does not live in the source Cameron-Martin space");
        pushed.push_back(m * hd);
    }
    const Complex lhs =
        contract_directions(transported_derivatives(triple, f, n).components[static_cast<std::size_t>(n)], directions);
    const Complex rhs =
        contract_directions(stroock_coefficients(f, n).components[static_cast<std::size_t>(n)], pushed);
    return std::abs(lhs - rhs);
}

DiagramResidual verify_gaussian_diagram(const SkewTriple& triple, const CylindricalFunction& f, int truncation,
                                        const std::vector<Vector>& probes)
{
    const ChaosCoefficients direct = transported_derivatives(triple, f, truncation);
    const ChaosCoefficients lifted = second_quantised(triple, stroock_coefficients(f, truncation));
    DiagramResidual res;
    for (int n = 0; n <= truncation; ++n) {
        const auto i = static_cast<std::size_t>(n);
        res.coefficient = std::max(res.coefficient, (direct.components[i] - lifted.components[i]).norm());
    }
    for (const Vector& x : probes) {
        const Complex lhs = mehler_apply(triple, f, x);
        const Complex rhs = chaos_evaluate(lifted, triple.gaussian_source(), x);
        res.reconstruction = std::max(res.reconstruction, std::abs(lhs - rhs));
    }
    return res;
}

IsometryResidual chaos_isometry_check(const GaussianLaw& law, int max_degree)
{
    const int r = law.rank();
    std::vector<SymTensor> basis;
    std::vector<double> expected; // n! <e_alpha, e_alpha> = n! / M(alpha)
    std::vector<int> degree;
    for (int n = 0; n <= max_degree; ++n) {
        const MultisetIndex& idx = multiset_index(r, n);
        for (std::size_t a = 0; a < idx.size(); ++a) {
            SymTensor e(r, n);
            e[a] = 1.0;
            basis.push_back(e);
            expected.push_back(factorial(n) * inner(e, e));
            degree.push_back(n);
        }
    }
    const std::size_t m = basis.size();
    const int nodes = max_degree + 1;
    check_grid(nodes, r);
    Matrix gram = Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    Vector values(static_cast<Eigen::Index>(m));
    for_each_grid_point(r, nodes, [&](std::span<const double> zs, double w) {
        const Vector x = law.factor() * Eigen::Map<const Vector>(zs.data(), r);
        for (std::size_t b = 0; b < m; ++b)
            values(static_cast<Eigen::Index>(b)) = multiple_integral(basis[b], law, x);
        gram.noalias() += w * values * values.transpose();
    });
    IsometryResidual res;
    for (std::size_t b = 0; b < m; ++b)
        for (std::size_t c = 0; c < m; ++c) {
            const double g = gram(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(c)) /
                             std::sqrt(expected[b] * expected[c]);
            if (degree[b] == degree[c])
                res.isometry = std::max(res.isometry, std::abs(g - (b == c ? 1.0 : 0.0)));
            else
                res.orthogonality = std::max(res.orthogonality, std::abs(g));
        }
    return res;
}

} // namespace skewq
