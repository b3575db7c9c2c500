#include <doctest.h>

#include <cmath>
#include <sstream>

#include "skewq/error.hpp"
#include "skewq/families.hpp"
#include "skewq/mehler.hpp"
#include "skewq/ou.hpp"

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

Matrix mat(std::initializer_list<std::initializer_list<double>> rows)
{
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (double x : r)
            m(i, j++) = x;
        ++i;
    }
    return m;
}

OUSystem scalar_gaussian() { return OUSystem::gaussian(mat({{-1.0}}), mat({{2.0}})); }

OUSystem planar_jump()
{
    return OUSystem::jump(mat({{-1.0, 0.5}, {-0.3, -0.8}}),
                          AtomicLevyMeasure(2, {vec({0.5, 0.5}), vec({2.0, 0.0})}, {1.0, 0.4}), vec({0.1, 0.1}));
}

OUSystem planar_gaussian()
{
    return OUSystem::gaussian(mat({{-1.0, 0.5}, {-0.3, -0.8}}), mat({{1.0, 0.2}, {0.2, 0.5}}));
}

} // namespace

TEST_SUITE("ou")
{
    TEST_CASE("semigroup of the drift")
    {
        const OUSystem sys = planar_jump();
        CHECK(max_abs(sys.semigroup(0.0) - Matrix::Identity(2, 2)) < 1e-15);
        for (double s : {0.1, 0.7, 2.0})
            for (double t : {0.2, 1.3})
                CHECK(max_abs(sys.semigroup(s + t) - sys.semigroup(s) * sys.semigroup(t)) < 1e-12);
    }

    TEST_CASE("scalar Gaussian marginals")
    {
        const OUSystem sys = scalar_gaussian();
        CHECK(marginal_law(sys, 0.0).gaussian->covariance()(0, 0) == doctest::Approx(0.0));
        for (double t : {0.1, 0.5, 1.0, 3.0}) {
            const OULaw law = marginal_law(sys, t);
            REQUIRE(law.gaussian.has_value());
            CHECK(law.gaussian->covariance()(0, 0) == doctest::Approx(1.0 - std::exp(-2.0 * t)).epsilon(1e-12));
        }
        CHECK(invariant_law(sys).gaussian->covariance()(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(verify_skew_semigroup(sys, 0.0, 0.5) < 1e-15);
        CHECK(verify_skew_semigroup(sys, 0.3, 0.7) < 1e-9);
    }

    TEST_CASE("planar Gaussian marginal against the integral definition")
    {
        const OUSystem sys = planar_gaussian();
        const double t = 0.8;
        // composite Simpson on int_0^t S(u) B S(u)^T du with many panels
        const int n = 2000;
        Matrix acc = Matrix::Zero(2, 2);
        for (int k = 0; k <= n; ++k) {
            const double u = t * k / n;
            const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            const Matrix s = sys.semigroup(u);
            acc += w * s * sys.diffusion() * s.transpose();
        }
        acc *= t / (3.0 * n);
        CHECK(max_abs(marginal_law(sys, t).gaussian->covariance() - acc) < 1e-10);
    }

    TEST_CASE("jump marginals")
    {
        const OUSystem sys = planar_jump();
        for (double t : {0.0, 0.5, 2.0})
            CHECK(std::abs(marginal_law(sys, t).char_fn(Vector::Zero(2)) - 1.0) < 1e-15);
        const Vector probe = vec({0.7, -0.4});
        CHECK(std::abs(marginal_law(sys, 0.0).char_fn(probe) - 1.0) < 1e-15);
        CHECK(verify_skew_semigroup(sys, 0.0, 1.0) < 1e-12);
        CHECK(verify_skew_semigroup(sys, 0.4, 0.9, 50, 1, 1.0, 1e-9) < 1e-7);

        // one-dimensional closed form: mu_t^(x) = exp(i b x (1 - e^{-at})/a + w int_0^t (e^{i y x e^{-au}} - 1) du)
        const OUSystem one = OUSystem::jump(mat({{-0.5}}), AtomicLevyMeasure(1, {vec({2.0})}, {0.7}), vec({0.3}));
        const double t = 1.2, x = 0.9, a = 0.5;
        Complex integral = 0.0;
        const int n = 20000;
        for (int k = 0; k <= n; ++k) {
            const double u = t * k / n;
            const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            integral += w * (std::exp(Complex(0.0, 2.0 * x * std::exp(-a * u))) - 1.0);
        }
        integral *= t / (3.0 * n);
        const Complex expected = std::exp(Complex(0.0, 0.3 * x * (1 - std::exp(-a * t)) / a) + 0.7 * integral);
        CHECK(std::abs(marginal_law(one, t).char_fn(vec({x})) - expected) < 1e-10);
    }

    TEST_CASE("invariant laws")
    {
        const OUSystem g = planar_gaussian();
        const OULaw inv = invariant_law(g);
        CHECK(lyapunov_residual(g.drift(), g.diffusion(), inv.gaussian->covariance()) < 1e-10);
        const SkewTriple sd = check_self_decomposable(g.semigroup(1.0), *inv.gaussian);
        CHECK(sd.min_eigenvalue >= -1e-9);
        for (double t : {0.5, 1.0, 2.0})
            CHECK(self_decomposability_residual(g, inv, t) < 1e-10);

        const OUSystem j = planar_jump();
        const OULaw invj = invariant_law(j);
        CHECK(self_decomposability_residual(j, invj, 1.0) < 1e-7);

        CHECK_THROWS_AS(invariant_law(OUSystem::gaussian(mat({{0.0, 0.0}, {0.0, -1.0}}), Matrix::Identity(2, 2))),
                        NotStable);
        CHECK_THROWS_AS(invariant_law(OUSystem::gaussian(mat({{0.1}}), mat({{1.0}}))), NotStable);
    }

    TEST_CASE("Mehler semigroup")
    {
        Draw draw(1);
        for (const OUSystem& sys : {planar_gaussian(), planar_jump()}) {
            const TestFunction f = random_trigonometric(draw, 2, 3);
            CHECK(chapman_kolmogorov_residual(sys, 0.3, 0.6, f) < 1e-7);
            const ExpMartingaleVector k = exp_martingale(invariant_law(sys).char_fn, vec({0.4, -0.2}));
            CHECK(invariant_fixed_point_residual(sys, invariant_law(sys), 0.7, k.as_function()) < 1e-7);
        }
    }

    TEST_CASE("deterministic paths")
    {
        const OUSystem sys = OUSystem::gaussian(mat({{-1.0, 0.5}, {-0.3, -0.8}}), Matrix::Zero(2, 2));
        Rng rng(1);
        const Vector y0 = vec({0.5, -0.3});
        const OUPath p = simulate_path(sys, y0, {0.0, 0.5, 1.0}, rng);
        REQUIRE(p.states.size() == 3);
        for (std::size_t k = 0; k < 3; ++k)
            CHECK((p.states[k] - sys.semigroup(p.times[k]) * y0).norm() < 1e-12);
        std::ostringstream out;
        write_path_csv(out, p);
        CHECK(out.str().rfind("t,y0,y1\n", 0) == 0);
        const OUSystem nojump = OUSystem::jump(mat({{-0.5}}), AtomicLevyMeasure(1, {}, {}), vec({0.0}));
        const OUPath q = simulate_path(nojump, vec({2.0}), {0.0, 1.0}, rng);
        CHECK(q.states[1](0) == doctest::Approx(2.0 * std::exp(-0.5)));
    }

    TEST_CASE("path endpoints match the marginal laws")
    {
        const OUSystem sys = scalar_gaussian();
        const std::size_t n = 100000;
        const SampleBatch e = simulate_endpoints(sys, vec({0.0}), {0.0, 0.25, 0.5, 0.75, 1.0}, n, 3, 2);
        const double mean = e.col(0).mean();
        const Eigen::ArrayXd c = e.col(0).array() - mean;
        const double var = c.square().sum() / static_cast<double>(n - 1);
        const double m4 = c.pow(4).mean();
        const double se = std::sqrt((m4 - var * var) / static_cast<double>(n));
        CHECK(std::abs(var - (1.0 - std::exp(-2.0))) < 3.0 * se);

        Draw draw(2);
        for (const OUSystem& s2 : {planar_gaussian(), planar_jump()}) {
            const Vector y0 = vec({0.5, -0.3});
            const SampleBatch b = simulate_endpoints(s2, y0, {0.0, 0.5, 1.0}, n, 4, 2);
            const CharFn law = marginal_law(s2, 1.0).char_fn;
            const Vector shift = s2.semigroup(1.0) * y0;
            for (int k = 0; k < 10; ++k) {
                const Vector probe = draw.normal_vector(2);
                const EmpiricalCharFn emp = empirical_char_fn(b, probe);
                const Complex exact = law(probe) * std::exp(Complex(0.0, shift.dot(probe)));
                CHECK(std::abs(emp.value.real() - exact.real()) <= 4.0 * emp.se_real + 1e-12);
                CHECK(std::abs(emp.value.imag() - exact.imag()) <= 4.0 * emp.se_imag + 1e-12);
            }
        }
    }
}
