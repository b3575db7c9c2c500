#include <doctest.h>

#include <cmath>

#include "skewq/error.hpp"
#include "skewq/families.hpp"
#include "skewq/mehler.hpp"

using namespace skewq;

namespace {

Vector vec(std::initializer_list<double> xs)
{
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs)
        v(i++) = x;
    return v;
}

SkewTriple diag_triple()
{
    const GaussianLaw id(Matrix::Identity(2, 2));
    return build_skew_factor(vec({0.6, 0.8}).asDiagonal(), id, id);
}

Complex value(const SkewTriple& t, const TestFunction& f, const Vector& x)
{
    return mehler_apply(t, f, x).value;
}

} // namespace

TEST_SUITE("mehler")
{
    TEST_CASE("unital on constants")
    {
        Draw draw(1);
        const SkewTriple g = random_gaussian_triple(draw, 3);
        const SkewTriple j = random_jump_triple(draw);
        for (int k = 0; k < 5; ++k) {
            const int d1 = static_cast<int>(g.map.cols());
            CHECK(std::abs(value(g, TestFunction::constant(g.map.rows(), 1.0), draw.normal_vector(d1)) - 1.0) < 1e-12);
            const TestFunction cb = TestFunction::callback(static_cast<int>(j.map.rows()), [](const Vector&) { return Complex(1.0); });
            CHECK(std::abs(value(j, cb, draw.normal_vector(static_cast<int>(j.map.cols()))) - 1.0) < 1e-12);
        }
    }

    TEST_CASE("linear functionals under a centered Gaussian factor")
    {
        const SkewTriple t = diag_triple();
        const Vector xs = vec({0.3, -1.1});
        const Vector x = vec({2.0, 0.5});
        CHECK(std::abs(value(t, TestFunction::linear(xs), x) - (t.map * x).dot(xs)) < 1e-12);
    }

    TEST_CASE("exponential martingale vectors")
    {
        const Vector xs = vec({0.7});
        const ExpMartingaleVector k0 = exp_martingale(point_mass_char_fn(Vector::Zero(1)), xs);
        CHECK(std::abs(k0(vec({1.3})) - std::exp(Complex(0.0, 0.7 * 1.3))) < 1e-15);
        const ExpMartingaleVector k1 = exp_martingale(Law(GaussianLaw(Matrix::Identity(1, 1))), vec({1.0}));
        for (double x : {-1.0, 0.0, 2.5})
            CHECK(std::abs(k1(vec({x})) - std::exp(Complex(0.5, x))) < 1e-14);
        const ExpMartingaleVector kz = exp_martingale(Law(GaussianLaw(Matrix::Identity(2, 2))), Vector::Zero(2));
        CHECK(std::abs(kz(vec({0.4, -3.0})) - 1.0) < 1e-15);
        Draw draw(2);
        const GaussianLaw g = random_gaussian(draw, 3);
        const Law law = g;
        const ExpMartingaleVector k = exp_martingale(law, draw.normal_vector(3));
        CHECK(std::abs(expectation(k.as_function(), law) - 1.0) < 1e-10);
    }

    TEST_CASE("P_T maps exponential martingales to exponential martingales")
    {
        Draw draw(3);
        const SkewTriple d = diag_triple();
        std::vector<Vector> probes;
        for (int k = 0; k < 50; ++k)
            probes.push_back(draw.normal_vector(2));
        CHECK(verify_identityPTK(d, Vector::Zero(2), probes) < 1e-15);
        CHECK(verify_identityPTK(d, vec({0.8, -0.5}), probes) < 1e-9);

        for (int trial = 0; trial < 5; ++trial) {
            const SkewTriple j = random_jump_triple(draw);
            std::vector<Vector> pts;
            for (int k = 0; k < 20; ++k)
                pts.push_back(draw.normal_vector(static_cast<int>(j.map.cols())));
            CHECK(verify_identityPTK(j, draw.normal_vector(static_cast<int>(j.map.rows())), pts) < 1e-8);
        }

        // Direct comparison against an independently built K on the source.
        const Vector xs = vec({0.4, 0.9});
        const ExpMartingaleVector k2 = exp_martingale(d.target, xs);
        const ExpMartingaleVector k1 = exp_martingale(d.source, d.map.transpose() * xs);
        for (const Vector& x : probes)
            CHECK(std::abs(value(d, k2.as_function(), x) - k1(x)) < 1e-9);
    }

    TEST_CASE("linearity and positivity")
    {
        Draw draw(4);
        for (int trial = 0; trial < 5; ++trial) {
            const SkewTriple t = random_gaussian_triple(draw, 3);
            const int d2 = static_cast<int>(t.map.rows());
            const int d1 = static_cast<int>(t.map.cols());
            const TestFunction f = random_trigonometric(draw, d2, 3);
            const TestFunction g = TestFunction::from_polynomial(random_polynomial(draw, d2, 3, 4));
            const Complex a(0.3, -1.2), b(2.0, 0.5);
            const TestFunction h = linear_combination(a, f, b, g);
            Polynomial sq = Polynomial::affine(draw.normal_vector(d2), 0.7);
            sq = sq * sq;
            for (int k = 0; k < 5; ++k) {
                const Vector x = draw.normal_vector(d1);
                const Complex lhs = value(t, h, x);
                const Complex rhs = a * value(t, f, x) + b * value(t, g, x);
                CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
                CHECK(value(t, TestFunction::from_polynomial(sq), x).real() >= -1e-12);
            }
        }
    }

    TEST_CASE("Monte Carlo agrees with quadrature")
    {
        Draw draw(5);
        const SkewTriple t = random_gaussian_triple(draw, 3);
        const TestFunction f = random_trigonometric(draw, static_cast<int>(t.map.rows()), 3);
        const Vector x = draw.normal_vector(static_cast<int>(t.map.cols()));
        const Complex exact = value(t, f, x);
        const Estimate mc = mehler_apply(t, f, x, MonteCarloMethod{200000, 17, 2});
        CHECK(mc.std_error > 0.0);
        CHECK(std::abs(mc.value - exact) < 5.0 * mc.std_error);
    }

    TEST_CASE("transforms keep the function class")
    {
        Draw draw(6);
        const SkewTriple t = random_gaussian_triple(draw, 3);
        const int d2 = static_cast<int>(t.map.rows());
        const int d1 = static_cast<int>(t.map.cols());
        const TestFunction p = TestFunction::from_polynomial(random_polynomial(draw, d2, 3, 4));
        const TestFunction pt = mehler_transform(t, p);
        CHECK(pt.kind() == TestFunction::Kind::polynomial);
        CHECK(pt.degree() <= 3);
        const TestFunction f = random_trigonometric(draw, d2, 2);
        const TestFunction ft = mehler_transform(t, f);
        CHECK(ft.kind() == TestFunction::Kind::trigonometric);
        for (int k = 0; k < 5; ++k) {
            const Vector x = draw.normal_vector(d1);
            CHECK(std::abs(pt(x) - value(t, p, x)) < 1e-10);
            CHECK(std::abs(ft(x) - value(t, f, x)) < 1e-12);
        }
        CHECK_THROWS_AS(mehler_transform(t.map, char_fn(t.factor), p), UnsupportedQuadrature);
    }

    TEST_CASE("callbacks on a high-rank factor need Monte Carlo")
    {
        const GaussianLaw src(Matrix::Identity(5, 5));
        const GaussianLaw tgt(2.0 * Matrix::Identity(5, 5));
        const SkewTriple t = build_skew_factor(Matrix::Identity(5, 5), src, tgt);
        const TestFunction cb = TestFunction::callback(5, [](const Vector& y) { return Complex(std::cos(y(0))); });
        CHECK_THROWS_AS(mehler_apply(t, cb, Vector::Zero(5)), UnsupportedQuadrature);
        const Estimate mc = mehler_apply(t, cb, Vector::Zero(5), MonteCarloMethod{100000, 3, 1});
        CHECK(std::abs(mc.value - std::exp(-0.5)) < 5.0 * mc.std_error);
    }

    TEST_CASE("contraction in L^p")
    {
        Draw draw(7);
        const SkewTriple t = diag_triple();
        const ContractionCheck c = mehler_contraction_residual(t, TestFunction::constant(2, 2.0), 2.0, 1000, 1);
        CHECK(c.lhs.value == doctest::Approx(c.rhs.value));
        CHECK(c.holds());

        const Vector xs = vec({0.5, -0.7});
        const double ratio = gaussian_exp_martingale_norm_ratio(t, xs);
        const double expected = std::exp(0.5 * ((t.map.transpose() * xs).squaredNorm() - xs.squaredNorm()));
        CHECK(ratio == doctest::Approx(expected).epsilon(1e-14));
        CHECK(ratio <= 1.0);
        const ExpMartingaleVector k = exp_martingale(t.target, xs);
        const double exact = l2_norm(mehler_transform(t, k.as_function()), t.source) / l2_norm(k.as_function(), t.target);
        CHECK(exact == doctest::Approx(ratio).epsilon(1e-10));

        for (int seed = 0; seed < 10; ++seed) {
            const SkewTriple g = random_gaussian_triple(draw, 3);
            const TestFunction p = TestFunction::from_polynomial(random_polynomial(draw, static_cast<int>(g.map.rows()), 3, 4));
            CHECK(mehler_contraction_residual(g, p, 2.0, 20000, 100 + seed).holds());
            const double lhs = l2_norm(mehler_transform(g, p), g.source);
            CHECK(lhs <= l2_norm(p, g.target) * (1 + 1e-12));
        }
    }

    TEST_CASE("Gram independence certificates")
    {
        const CharFn g1 = char_fn(GaussianLaw(Matrix::Identity(1, 1)));
        const GramCertificate dup = gram_independence(g1, {vec({0.5}), vec({0.5})});
        CHECK(std::abs(dup.min_eigenvalue) < 1e-12);
        const GramCertificate single = gram_independence(g1, {vec({0.9})});
        CHECK(single.min_eigenvalue == doctest::Approx(1.0));
        const GramCertificate two = gram_independence(g1, {vec({0.5}), vec({1.0})});
        CHECK(std::abs(two.gram(0, 1) - std::exp(-0.125)) < 1e-15);
        CHECK(two.min_eigenvalue == doctest::Approx(1.0 - std::exp(-0.125)).epsilon(1e-12));

        Draw draw(8);
        for (int trial = 0; trial < 10; ++trial) {
            const int d = draw.integer(1, 3);
            const GaussianLaw g = random_gaussian(draw, d);
            const int n = draw.integer(2, 8);
            std::vector<Vector> fs;
            for (int k = 0; k < n; ++k)
                fs.push_back(draw.normal_vector(d, 2.0));
            CHECK(gram_independence(char_fn(g), fs).min_eigenvalue > 1e-10);
        }
    }
}
