#include "skewq/test_function.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "skewq/error.hpp"

namespace skewq {

namespace {

constexpr Complex kI{0.0, 1.0};

} // namespace

Polynomial::Polynomial(int dim) : dim_(dim) {}

Polynomial Polynomial::constant(int dim, Complex value)
{
    Polynomial p(dim);
    p.add_term(Exponents(static_cast<std::size_t>(dim), 0), value);
    return p;
}

Polynomial Polynomial::affine(const Vector& a, Complex c0)
{
    const int d = static_cast<int>(a.size());
    Polynomial p = constant(d, c0);
    for (int i = 0; i < d; ++i) {
        Exponents e(static_cast<std::size_t>(d), 0);
        e[static_cast<std::size_t>(i)] = 1;
        p.add_term(std::move(e), a(i));
    }
    return p;
}

int Polynomial::degree() const
{
    int deg = -1;
    for (const auto& [e, c] : terms_)
        if (c != 0.0)
            deg = std::max(deg, std::accumulate(e.begin(), e.end(), 0));
    return std::max(deg, 0);
}

void Polynomial::add_term(Exponents exponents, Complex coeff)
{
    if (exponents.size() != static_cast<std::size_t>(dim_))
        throw DimensionMismatch("Polynomial: exponent vector has " + std::to_string(exponents.size()) +
                                " entries, expected " + std::to_string(dim_));
    for (int e : exponents)
        if (e < 0)
            throw ValidationError("Polynomial: negative exponent");
    if (coeff == 0.0)
        return;
    auto it = terms_.find(exponents);
    if (it == terms_.end()) {
        terms_.emplace(std::move(exponents), coeff);
    } else {
        it->second += coeff;
        if (it->second == 0.0)
            terms_.erase(it);
    }
}

Complex Polynomial::operator()(std::span<const double> x) const
{
    if (x.size() != static_cast<std::size_t>(dim_))
        throw DimensionMismatch("Polynomial: evaluation point has wrong dimension");
    Complex sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double m = 1.0;
        for (int i = 0; i < dim_; ++i)
            for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k)
                m *= x[static_cast<std::size_t>(i)];
        sum += c * m;
    }
    return sum;
}

Complex Polynomial::operator()(const Vector& x) const
{
    return (*this)(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

Polynomial& Polynomial::operator+=(const Polynomial& other)
{
    if (other.dim_ != dim_)
        throw DimensionMismatch("Polynomial: adding polynomials in different dimensions");
    for (const auto& [e, c] : other.terms_)
        add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator*=(Complex factor)
{
    if (factor == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_)
        c *= factor;
    return *this;
}

Polynomial Polynomial::operator*(const Polynomial& other) const
{
    if (other.dim_ != dim_)
        throw DimensionMismatch("Polynomial: multiplying polynomials in different dimensions");
    Polynomial out(dim_);
    Exponents e(static_cast<std::size_t>(dim_));
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : other.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i)
                e[i] = ea[i] + eb[i];
            out.add_term(e, ca * cb);
        }
    return out;
}

Polynomial Polynomial::conjugate() const
{
    Polynomial out(dim_);
    for (const auto& [e, c] : terms_)
        out.add_term(e, std::conj(c));
    return out;
}

Polynomial Polynomial::compose(const Matrix& a, const Vector& shift) const
{
    if (a.rows() != dim_ || shift.size() != dim_)
        throw DimensionMismatch("Polynomial::compose: map has the wrong shape");
    const int m = static_cast<int>(a.cols());
    const int deg = degree();
    // powers[i][k] = (row_i . u + shift_i)^k
    std::vector<std::vector<Polynomial>> powers(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) {
        const Polynomial form = affine(a.row(i).transpose(), shift(i));
        auto& p = powers[static_cast<std::size_t>(i)];
        p.push_back(constant(m, 1.0));
        for (int k = 1; k <= deg; ++k)
            p.push_back(p.back() * form);
    }
    Polynomial out(m);
    for (const auto& [e, c] : terms_) {
        Polynomial term = constant(m, c);
        for (int i = 0; i < dim_; ++i)
            if (e[static_cast<std::size_t>(i)] > 0)
                term = term * powers[static_cast<std::size_t>(i)][static_cast<std::size_t>(e[static_cast<std::size_t>(i)])];
        out += term;
    }
    return out;
}

Polynomial Polynomial::integrate_trailing(int keep, const std::function<Complex(std::span<const int>)>& moment) const
{
    if (keep < 0 || keep > dim_)
        throw DimensionMismatch("Polynomial::integrate_trailing: bad split");
    Polynomial out(keep);
    for (const auto& [e, c] : terms_) {
        const std::span<const int> tail(e.data() + keep, e.size() - static_cast<std::size_t>(keep));
        const Complex mom = moment(tail);
        out.add_term(Exponents(e.begin(), e.begin() + keep), c * mom);
    }
    return out;
}

Polynomial operator+(Polynomial a, const Polynomial& b)
{
    a += b;
    return a;
}

Polynomial operator*(Complex factor, Polynomial p)
{
    p *= factor;
    return p;
}

double normal_moment(int k)
{
    if (k < 0 || k % 2 == 1)
        return 0.0;
    double m = 1.0;
    for (int j = k - 1; j > 1; j -= 2)
        m *= j;
    return m;
}

TestFunction::TestFunction(Kind kind, int dim) : kind_(kind), dim_(dim) {}

TestFunction TestFunction::constant(int dim, Complex value)
{
    return from_polynomial(Polynomial::constant(dim, value));
}

TestFunction TestFunction::from_polynomial(Polynomial p)
{
    TestFunction f(Kind::polynomial, p.dim());
    f.poly_.push_back(std::move(p));
    return f;
}

TestFunction TestFunction::linear(const Vector& functional)
{
    return from_polynomial(Polynomial::affine(functional));
}

TestFunction TestFunction::trigonometric(int dim, std::vector<Complex> coeffs, std::vector<Vector> frequencies)
{
    if (coeffs.size() != frequencies.size())
        throw ValidationError("trigonometric: coefficient and frequency counts differ");
    for (const Vector& f : frequencies)
        if (f.size() != dim)
            throw DimensionMismatch("trigonometric: frequency has the wrong dimension");
    TestFunction f(Kind::trigonometric, dim);
    f.coeffs_ = std::move(coeffs);
    f.frequencies_ = std::move(frequencies);
    return f;
}

TestFunction TestFunction::callback(int dim, std::function<Complex(const Vector&)> fn)
{
    TestFunction f(Kind::callback, dim);
    f.fn_ = std::move(fn);
    return f;
}

int TestFunction::degree() const
{
    return kind_ == Kind::polynomial ? poly_.front().degree() : -1;
}

const Polynomial& TestFunction::polynomial() const
{
    if (kind_ != Kind::polynomial)
        throw std::logic_error("TestFunction::polynomial on a non-polynomial function");
    return poly_.front();
}

Complex TestFunction::operator()(const Vector& x) const
{
    if (x.size() != dim_)
        throw DimensionMismatch("TestFunction: point has dimension " + std::to_string(x.size()) + ", expected " +
                                std::to_string(dim_));
    switch (kind_) {
    case Kind::polynomial:
        return poly_.front()(x);
    case Kind::trigonometric: {
        Complex sum = 0.0;
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            sum += coeffs_[k] * std::exp(kI * frequencies_[k].dot(x));
        return sum;
    }
    case Kind::callback:
        return fn_(x);
    }
    return 0.0;
}

TestFunction linear_combination(Complex alpha, const TestFunction& f, Complex beta, const TestFunction& g)
{
    if (f.dim() != g.dim())
        throw DimensionMismatch("linear_combination: dimensions differ");
    if (f.kind() == TestFunction::Kind::polynomial && g.kind() == TestFunction::Kind::polynomial)
        return TestFunction::from_polynomial(alpha * f.polynomial() + beta * g.polynomial());
    if (f.kind() == TestFunction::Kind::trigonometric && g.kind() == TestFunction::Kind::trigonometric) {
        std::vector<Complex> c;
        std::vector<Vector> th;
        for (std::size_t k = 0; k < f.coefficients().size(); ++k) {
            c.push_back(alpha * f.coefficients()[k]);
            th.push_back(f.frequencies()[k]);
        }
        for (std::size_t k = 0; k < g.coefficients().size(); ++k) {
            c.push_back(beta * g.coefficients()[k]);
            th.push_back(g.frequencies()[k]);
        }
        return TestFunction::trigonometric(f.dim(), std::move(c), std::move(th));
    }
    return TestFunction::callback(f.dim(), [alpha, f, beta, g](const Vector& x) { return alpha * f(x) + beta * g(x); });
}

ExpMartingaleVector::ExpMartingaleVector(CharFn law, Vector functional)
    : functional_(std::move(functional)), normaliser_(law(functional_))
{
    if (std::abs(normaliser_) == 0.0)
        throw ValidationError("exp_martingale: characteristic function vanishes at the functional");
}

Complex ExpMartingaleVector::operator()(const Vector& x) const
{
    if (x.size() != functional_.size())
        throw DimensionMismatch("ExpMartingaleVector: point has the wrong dimension");
    return std::exp(kI * functional_.dot(x)) / normaliser_;
}

TestFunction ExpMartingaleVector::as_function() const
{
    return TestFunction::trigonometric(static_cast<int>(functional_.size()), {1.0 / normaliser_}, {functional_});
}

ExpMartingaleVector exp_martingale(const Law& mu, const Vector& functional)
{
    return ExpMartingaleVector(char_fn(mu), functional);
}

ExpMartingaleVector exp_martingale(const CharFn& mu, const Vector& functional)
{
    return ExpMartingaleVector(mu, functional);
}

} // namespace skewq
