#include <doctest.h>

#include <cmath>
#include <complex>

#include "skewq/error.hpp"
#include "skewq/families.hpp"
#include "skewq/mehler.hpp"
#include "skewq/multiset.hpp"
#include "skewq/point_configuration.hpp"
#include "skewq/poisson_chaos.hpp"

using namespace skewq;

namespace {

using LevyPtr = std::shared_ptr<const AtomicLevyMeasure>;

Vector vec(std::initializer_list<double> xs)
{
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs)
        v(i++) = x;
    return v;
}

LevyPtr three_atoms()
{
    return std::make_shared<const AtomicLevyMeasure>(
        2, std::vector<Vector>{vec({1.0, 0.0}), vec({0.0, 0.5}), vec({-1.5, 1.0})}, std::vector<double>{0.4, 0.3, 0.2});
}

// Poisson pmf from the closed form, cut where the tail is negligible.
std::vector<double> pmf(double w)
{
    std::vector<double> p;
    double term = std::exp(-w), mass = 0.0;
    for (int k = 0; 1.0 - mass > 1e-17 && k < 200; ++k) {
        p.push_back(term);
        mass += term;
        term *= w / (k + 1);
    }
    return p;
}

// E[g(N)] over independent Poisson counts, enumerated directly.
template <class G>
Complex expect_counts(const LevyPtr& levy, G g)
{
    const std::size_t m = levy->size();
    std::vector<std::vector<double>> p;
    for (std::size_t j = 0; j < m; ++j)
        p.push_back(pmf(levy->weight(j)));
    std::vector<int> n(m, 0);
    Complex s = 0.0;
    while (true) {
        double prob = 1.0;
        for (std::size_t j = 0; j < m; ++j)
            prob *= p[j][static_cast<std::size_t>(n[j])];
        s += prob * g(PointConfiguration(levy, n));
        std::size_t j = 0;
        while (j < m && ++n[j] == static_cast<int>(p[j].size()))
            n[j++] = 0;
        if (j == m)
            break;
    }
    return s;
}

SymFnTensor random_kernel(Draw& draw, const LevyPtr& levy, int degree)
{
    SymFnTensor t(levy, degree);
    for (std::size_t r = 0; r < t.size(); ++r)
        t[r] = Complex(draw.normal(), draw.normal());
    return t;
}

} // namespace

TEST_SUITE("poisson_chaos")
{
    TEST_CASE("configurations are additive")
    {
        const LevyPtr levy = three_atoms();
        const PointConfiguration eta(levy, {2, 0, 3});
        const std::size_t a[] = {0, 1};
        const std::size_t b[] = {2};
        const std::size_t ab[] = {0, 1, 2};
        CHECK(eta.mass(a) + eta.mass(b) == eta.mass(ab));
        CHECK(eta.total() == 5);
        const PointConfiguration e2 = eta.add(1, 2);
        CHECK(e2.count(1) == 2);
        CHECK(eta.count(1) == 0);
    }

    TEST_CASE("Charlier polynomials")
    {
        for (double a : {0.3, 1.0, 2.5})
            for (double x : {0.0, 1.0, 4.0}) {
                CHECK(charlier(0, a, x) == 1.0);
                CHECK(charlier(1, a, x) == doctest::Approx(x - a));
                CHECK(charlier(2, a, x) == doctest::Approx((x - 1 - a) * (x - a) - a));
            }
    }

    TEST_CASE("difference operators of count statistics")
    {
        const LevyPtr levy = three_atoms();
        const std::vector<std::size_t> in_b{0, 2};
        const ConfigFunction count = ConfigFunction::count_in(levy, in_b);
        Polynomial sq(3);
        sq.add_term({2, 0, 0}, 1.0);
        sq.add_term({0, 0, 2}, 1.0);
        sq.add_term({1, 0, 1}, 2.0);
        const ConfigFunction square = ConfigFunction::count_polynomial(levy, sq);
        const PointConfiguration eta(levy, {1, 2, 3});
        const int eta_b = 4;
        for (std::size_t y = 0; y < 3; ++y) {
            const double ind = y == 1 ? 0.0 : 1.0;
            const std::size_t one[] = {y};
            CHECK(difference_operator(count, eta, one) == Complex(ind));
            CHECK(difference_operator(square, eta, one) == Complex(2 * eta_b * ind + ind));
            for (std::size_t z = 0; z < 3; ++z) {
                const double ind2 = z == 1 ? 0.0 : 1.0;
                const std::size_t two[] = {y, z};
                const std::size_t owt[] = {z, y};
                CHECK(difference_operator(count, eta, two) == Complex(0.0));
                CHECK(difference_operator(square, eta, two) == Complex(2 * ind * ind2));
                CHECK(difference_operator(square, eta, two) == difference_operator(square, eta, owt));
            }
        }
    }

    TEST_CASE("difference operators are symmetric for non-integer statistics")
    {
        const LevyPtr levy = three_atoms();
        const ConfigFunction f = ConfigFunction::callback(levy, [](std::span<const int> n) {
            return std::exp(Complex(0.0, 0.3 * n[0] - 0.7 * n[1] + 1.1 * n[2])) / (1.0 + n[0] + n[1] * n[2]);
        });
        const PointConfiguration eta(levy, {1, 0, 2});
        const std::size_t a[] = {0, 2, 1};
        const std::size_t b[] = {1, 0, 2};
        const std::size_t c[] = {2, 1, 0};
        const Complex va = difference_operator(f, eta, a);
        CHECK(std::abs(va - difference_operator(f, eta, b)) < 1e-12);
        CHECK(std::abs(va - difference_operator(f, eta, c)) < 1e-12);
    }

    TEST_CASE("Last-Penrose kernels of simple functions")
    {
        const LevyPtr levy = three_atoms();
        const ConfigFunction f = ConfigFunction::count_in(levy, {0});
        const std::vector<SymFnTensor> k = last_penrose_kernels(f, 3);
        CHECK(std::abs(k[0][0] - 0.4) < 1e-14);
        const int a0[] = {0};
        const int a1[] = {1};
        CHECK(std::abs(k[1].at(a0) - 1.0) < 1e-14);
        CHECK(std::abs(k[1].at(a1)) < 1e-14);
        CHECK(k[2].norm() < 1e-14);
        CHECK(k[3].norm() < 1e-14);

        Polynomial c(3);
        c.add_term({0, 0, 0}, 2.0);
        const std::vector<SymFnTensor> kc = last_penrose_kernels(ConfigFunction::count_polynomial(levy, c), 2);
        CHECK(std::abs(kc[0][0] - 2.0) < 1e-14);
        CHECK(kc[1].norm() < 1e-14);
        CHECK(kc[2].norm() < 1e-14);
    }

    TEST_CASE("kernels of pulled-back exponential martingales follow the product formula")
    {
        const LevyPtr levy = three_atoms();
        const CompoundPoissonLaw law(vec({0.1, -0.2}), levy);
        const Vector xs = vec({0.8, -1.3});
        const ExpMartingaleVector k = exp_martingale(Law(law), xs);
        const std::vector<SymFnTensor> kernels = last_penrose_kernels(ConfigFunction::pullback(law, k.as_function()), 3);
        for (int n = 0; n <= 3; ++n) {
            const MultisetIndex& idx = multiset_index(3, n);
            for (std::size_t r = 0; r < idx.size(); ++r) {
                std::vector<Vector> pts;
                for (int a : idx.indices(r))
                    pts.push_back(levy->atom(static_cast<std::size_t>(a)));
                CHECK(std::abs(kernels[static_cast<std::size_t>(n)][r] - product_exponential(pts, xs)) < 1e-10);
            }
        }
    }

    TEST_CASE("multiple integrals")
    {
        const LevyPtr levy = three_atoms();
        const PointConfiguration eta(levy, {3, 1, 0});
        SymFnTensor ind(levy, 1);
        ind[1] = 1.0;
        CHECK(std::abs(poisson_multiple_integral(ind, eta) - (1.0 - 0.3)) < 1e-14);
        SymFnTensor c(levy, 0);
        c[0] = Complex(2.0, -1.0);
        CHECK(poisson_multiple_integral(c, eta) == Complex(2.0, -1.0));

        const LevyPtr other = std::make_shared<const AtomicLevyMeasure>(1, std::vector<Vector>{vec({1.0})},
                                                                        std::vector<double>{1.0});
        CHECK_THROWS_AS(poisson_multiple_integral(SymFnTensor(other, 1), eta), AtomSetMismatch);
    }

    TEST_CASE("second-order isometry by direct enumeration")
    {
        Draw draw(1);
        const LevyPtr levy = std::make_shared<const AtomicLevyMeasure>(
            1, std::vector<Vector>{vec({1.0}), vec({-2.0})}, std::vector<double>{0.7, 1.3});
        for (int trial = 0; trial < 5; ++trial) {
            const SymFnTensor t = random_kernel(draw, levy, 2);
            const Complex e = expect_counts(levy, [&](const PointConfiguration& eta) {
                return std::norm(poisson_multiple_integral(t, eta));
            });
            CHECK(e.real() == doctest::Approx(2.0 * t.norm() * t.norm()).epsilon(1e-10));
            const SymFnTensor s = random_kernel(draw, levy, 1);
            const Complex cross = expect_counts(levy, [&](const PointConfiguration& eta) {
                return poisson_multiple_integral(t, eta) * std::conj(poisson_multiple_integral(s, eta));
            });
            CHECK(std::abs(cross) < 1e-10);
        }
    }

    TEST_CASE("isometry and orthogonality up to degree three")
    {
        Draw draw(2);
        for (int m = 1; m <= 3; ++m) {
            const LevyPtr levy = std::make_shared<const AtomicLevyMeasure>(random_levy(draw, 2, m));
            const PoissonIntegralIsometry r = poisson_isometry_check(levy, 3);
            CHECK(r.isometry < 1e-9);
            CHECK(r.orthogonality < 1e-9);
        }
    }

    TEST_CASE("reconstruction")
    {
        const LevyPtr levy = three_atoms();
        const ConfigFunction lin = ConfigFunction::linear_statistic(levy, {0.5, -1.0, 2.0});
        CHECK(last_penrose_l2_residual(lin, 1) < 1e-10);
        const PointConfiguration eta(levy, {2, 1, 4});
        CHECK(std::abs(last_penrose_reconstruct(lin, 1, eta) - lin(eta)) < 1e-12);

        Polynomial q(3);
        q.add_term({2, 0, 0}, 1.0);
        q.add_term({0, 1, 1}, -3.0);
        q.add_term({0, 0, 0}, 0.5);
        const ConfigFunction quad = ConfigFunction::count_polynomial(levy, q);
        CHECK(last_penrose_l2_residual(quad, 2) < 1e-10);
        CHECK(std::abs(last_penrose_reconstruct(quad, 2, eta) - quad(eta)) < 1e-10);
        const PoissonIsometry iso = last_penrose_isometry(quad, 2);
        CHECK(iso.chaos_squared == doctest::Approx(iso.norm_squared).epsilon(1e-10));

        Polynomial one(3);
        one.add_term({0, 0, 0}, 4.0);
        CHECK(last_penrose_l2_residual(ConfigFunction::count_polynomial(levy, one), 0) < 1e-14);

        const LevyPtr light = std::make_shared<const AtomicLevyMeasure>(
            1, std::vector<Vector>{vec({1.0}), vec({-0.5})}, std::vector<double>{0.5, 0.3});
        const CompoundPoissonLaw law(vec({0.0}), light);
        // residual^2 = sum_{n>6} s^n / n! with s = sum_j w_j |exp(i y_j x*) - 1|^2
        for (double xs : {0.5, 1.2}) {
            const ExpMartingaleVector k = exp_martingale(Law(law), vec({xs}));
            const double s = 0.5 * std::norm(std::exp(Complex(0.0, xs)) - 1.0) +
                             0.3 * std::norm(std::exp(Complex(0.0, -0.5 * xs)) - 1.0);
            double tail = 0.0, fact = 1.0;
            for (int n = 1; n <= 40; ++n) {
                fact *= n;
                if (n > 6)
                    tail += std::pow(s, n) / fact;
            }
            const double res = last_penrose_l2_residual(ConfigFunction::pullback(law, k.as_function()), 6);
            CHECK(res == doctest::Approx(std::sqrt(tail)).epsilon(1e-6));
            if (xs < 1.0)
                CHECK(res < 1e-3);
        }
    }

    TEST_CASE("difference intertwining on jump triples")
    {
        Draw draw(3);
        for (int trial = 0; trial < 5; ++trial) {
            const SkewTriple t = random_jump_triple(draw);
            const int d1 = static_cast<int>(t.map.cols());
            const int d2 = static_cast<int>(t.map.rows());
            const TestFunction f = random_trigonometric(draw, d2, 3);
            for (int n = 0; n <= 3; ++n) {
                std::vector<Vector> pts;
                for (int k = 0; k < n; ++k)
                    pts.push_back(draw.normal_vector(d1));
                CHECK(verify_tilde_intertwine(t, f, pts) < 1e-9);
            }
        }
        const CompoundPoissonLaw mu1(vec({0.0}), AtomicLevyMeasure(1, {vec({1.0})}, {0.5}));
        const CompoundPoissonLaw mu2(vec({0.3}), AtomicLevyMeasure(1, {vec({2.0})}, {0.5}));
        const SkewTriple zero = build_skew_factor_jump(Matrix::Zero(1, 1), mu1, mu2);
        const TestFunction f = random_trigonometric(draw, 1, 2);
        CHECK(verify_tilde_intertwine(zero, f, {vec({1.0})}) < 1e-12);
        CHECK(std::abs(expected_tilde_difference(mehler_transform(zero, f), mu1, {vec({1.0})})) < 1e-12);
    }

    TEST_CASE("product formula for exponential martingales")
    {
        Draw draw(4);
        for (int trial = 0; trial < 5; ++trial) {
            const int d = draw.integer(1, 2);
            const CompoundPoissonLaw law(draw.normal_vector(d), random_levy(draw, d, 2));
            const Vector xs = draw.normal_vector(d);
            const ExpMartingaleVector k = exp_martingale(Law(law), xs);
            for (int n = 0; n <= 3; ++n) {
                std::vector<Vector> pts;
                Complex expected = 1.0;
                for (int j = 0; j < n; ++j) {
                    pts.push_back(draw.normal_vector(d));
                    expected *= std::exp(Complex(0.0, pts.back().dot(xs))) - 1.0;
                }
                CHECK(std::abs(expected_tilde_difference(k.as_function(), law, pts) - expected) < 1e-10);
                CHECK(std::abs(product_exponential(pts, xs) - expected) < 1e-14);
            }
        }
    }

    TEST_CASE("kernel contraction")
    {
        Draw draw(5);
        const LevyPtr levy = three_atoms();
        const SymFnTensor t = random_kernel(draw, levy, 2);
        CHECK((contract_kernel(t, Matrix::Identity(2, 2), levy) - t).norm() < 1e-15);
        const SymFnTensor s = random_kernel(draw, levy, 0);
        CHECK((contract_kernel(s, Matrix::Identity(2, 2), levy) - s).norm() < 1e-15);
        const LevyPtr other = std::make_shared<const AtomicLevyMeasure>(2, std::vector<Vector>{vec({3.0, 3.0})},
                                                                        std::vector<double>{1.0});
        CHECK_THROWS_AS(contract_kernel(t, Matrix::Identity(2, 2), other), AtomMismatch);

        for (int trial = 0; trial < 10; ++trial) {
            const SkewTriple tr = random_jump_triple(draw);
            const LevyPtr l1 = tr.jump_source().levy_ptr();
            const LevyPtr l2 = tr.jump_target().levy_ptr();
            for (int n = 0; n <= 3; ++n) {
                const SymFnTensor k = random_kernel(draw, l2, n);
                CHECK(contract_kernel(k, tr.map, l1).norm() <= k.norm() + 1e-12);
            }
        }
    }

    TEST_CASE("commuting diagram for jump triples")
    {
        Draw draw(6);
        for (int trial = 0; trial < 5; ++trial) {
            const SkewTriple t = random_jump_triple(draw);
            const int d2 = static_cast<int>(t.map.rows());
            CHECK(verify_poisson_diagram(t, TestFunction::constant(d2, 1.0), 3) < 1e-14);
            const ExpMartingaleVector k = exp_martingale(t.target, draw.normal_vector(d2));
            CHECK(verify_poisson_diagram(t, k.as_function(), 3) < 1e-9);
            CHECK(verify_poisson_diagram(t, random_trigonometric(draw, d2, 3), 3) < 1e-8);
        }
    }
}
