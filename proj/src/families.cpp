#include "skewq/families.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "skewq/error.hpp"

namespace skewq {

double Draw::normal()
{
    return std::normal_distribution<double>()(rng_);
}

double Draw::uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

int Draw::integer(int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
}

Matrix Draw::normal_matrix(int rows, int cols)
{
    Matrix m(rows, cols);
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            m(r, c) = normal();
    return m;
}

Vector Draw::normal_vector(int n, double scale)
{
    Vector v(n);
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = scale * normal();
    return v;
}

Vector Draw::vector_with_norm(int n, double norm)
{
    Vector v = normal_vector(n);
    while (v.norm() < 1e-6)
        v = normal_vector(n);
    return norm * v / v.norm();
}

Matrix Draw::orthonormal_columns(int rows, int cols)
{
    if (cols > rows)
        throw DimensionMismatch("orthonormal_columns: more columns than rows");
    Eigen::HouseholderQR<Matrix> qr(normal_matrix(rows, cols));
    return qr.householderQ() * Matrix::Identity(rows, cols);
}

GaussianLaw random_gaussian(Draw& draw, int dim, bool allow_degenerate, double floor)
{
    int rank = dim;
    if (allow_degenerate && dim > 1 && draw.uniform(0.0, 1.0) < 0.3)
        rank = draw.integer(1, dim - 1);
    const Matrix g = draw.normal_matrix(dim, rank) / std::sqrt(static_cast<double>(rank));
    Matrix q = g * g.transpose();
    if (rank == dim)
        q += floor * Matrix::Identity(dim, dim);
    return GaussianLaw(symmetrized(q));
}

Matrix scaled_map(Draw& draw, const GaussianLaw& mu1, const GaussianLaw& mu2, double u)
{
    const Matrix t0 = draw.normal_matrix(mu2.dim(), mu1.dim());
    Eigen::LLT<Matrix> llt(mu2.covariance());
    if (llt.info() != Eigen::Success)
        throw ValidationError("scaled_map: target covariance must be nondegenerate");
    const Matrix whitened = llt.matrixL().solve(t0 * mu1.factor());
    const double s = spectral_norm(whitened);
    if (!(s > 0.0))
        return Matrix::Zero(mu2.dim(), mu1.dim());
    return std::sqrt(u) * t0 / s;
}

SkewTriple random_gaussian_triple(Draw& draw, int max_dim, bool allow_degenerate_source)
{
    const int d1 = draw.integer(1, max_dim);
    const int d2 = draw.integer(1, max_dim);
    const GaussianLaw mu1 = random_gaussian(draw, d1, allow_degenerate_source);
    const GaussianLaw mu2 = random_gaussian(draw, d2, false);
    const Matrix t = scaled_map(draw, mu1, mu2, draw.uniform(0.2, 0.95));
    return build_skew_factor(t, mu1, mu2);
}

AtomicLevyMeasure random_levy(Draw& draw, int dim, int atoms)
{
    std::vector<Vector> pts;
    std::vector<double> weights;
    for (int k = 0; k < atoms; ++k) {
        pts.push_back(draw.vector_with_norm(dim, draw.uniform(0.3, 2.0)));
        weights.push_back(draw.uniform(0.2, 1.0));
    }
    return AtomicLevyMeasure(dim, std::move(pts), std::move(weights));
}

SkewTriple random_jump_triple(Draw& draw)
{
    const int d1 = draw.integer(1, 2);
    const int d2 = draw.integer(1, 2);
    const int k1 = draw.integer(1, 2);
    const AtomicLevyMeasure nu1 = random_levy(draw, d1, k1);
    Matrix t;
    for (;;) {
        t = draw.normal_matrix(d2, d1);
        bool separated = true;
        for (std::size_t i = 0; i < nu1.size(); ++i) {
            const Vector img = t * nu1.atom(i);
            if (img.norm() < 0.1)
                separated = false;
            for (std::size_t k = 0; k < i; ++k)
                if ((img - t * nu1.atom(k)).norm() < 0.1)
                    separated = false;
        }
        if (separated)
            break;
    }
    std::vector<Vector> atoms2;
    std::vector<double> weights2;
    for (std::size_t i = 0; i < nu1.size(); ++i) {
        atoms2.push_back(t * nu1.atom(i));
        weights2.push_back(nu1.weight(i) + (draw.uniform(0.0, 1.0) < 0.5 ? 0.0 : draw.uniform(0.0, 0.5)));
    }
    if (draw.uniform(0.0, 1.0) < 0.5) {
        Vector extra = draw.vector_with_norm(d2, draw.uniform(0.3, 2.0));
        bool clash = false;
        for (const Vector& a : atoms2)
            clash = clash || (a - extra).norm() < 0.1;
        if (!clash) {
            atoms2.push_back(std::move(extra));
            weights2.push_back(draw.uniform(0.2, 1.0));
        }
    }
    const CompoundPoissonLaw mu1(draw.normal_vector(d1), nu1);
    const CompoundPoissonLaw mu2(draw.normal_vector(d2), AtomicLevyMeasure(d2, std::move(atoms2), std::move(weights2)));
    return build_skew_factor_jump(t, mu1, mu2);
}

TestFunction random_trigonometric(Draw& draw, int dim, int terms, double scale)
{
    std::vector<Complex> coeffs;
    std::vector<Vector> freqs;
    for (int k = 0; k < terms; ++k) {
        coeffs.emplace_back(draw.normal() / terms, draw.normal() / terms);
        freqs.push_back(draw.normal_vector(dim, scale));
    }
    return TestFunction::trigonometric(dim, std::move(coeffs), std::move(freqs));
}

Polynomial random_polynomial(Draw& draw, int dim, int max_degree, int terms)
{
    Polynomial p(dim);
    auto monomial = [&](int degree) {
        Polynomial::Exponents e(static_cast<std::size_t>(dim), 0);
        for (int k = 0; k < degree; ++k)
            ++e[static_cast<std::size_t>(draw.integer(0, dim - 1))];
        return e;
    };
    p.add_term(monomial(max_degree), Complex(draw.normal(), draw.normal()));
    for (int k = 1; k < terms; ++k)
        p.add_term(monomial(draw.integer(0, max_degree)), Complex(draw.normal(), draw.normal()));
    return p;
}

CylindricalFunction random_cylindrical_polynomial(Draw& draw, const GaussianLaw& law, int max_degree, int terms)
{
    const int k = draw.integer(1, std::min(law.rank(), 2));
    const Matrix dirs = draw.orthonormal_columns(law.rank(), k);
    return CylindricalFunction::polynomial(law, dirs, random_polynomial(draw, k, max_degree, terms));
}

} // namespace skewq
