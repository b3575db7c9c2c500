#include "skewq/skew.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "skewq/error.hpp"

namespace skewq {

namespace {

void check_map(const Matrix& t, int d1, int d2)
{
    if (t.cols() != d1 || t.rows() != d2)
        throw DimensionMismatch("skew map is " + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) +
                                " but the laws live on R^" + std::to_string(d1) + " and R^" +
                                std::to_string(d2));
}

Vector random_probe(Rng& rng, int dim, double scale)
{
    std::normal_distribution<double> normal;
    Vector x(dim);
    for (int i = 0; i < dim; ++i)
        x(i) = scale * normal(rng);
    return x;
}

} // namespace

SkewTriple build_skew_factor(const Matrix& t, const GaussianLaw& mu1, const GaussianLaw& mu2)
{
    check_map(t, mu1.dim(), mu2.dim());
    const Matrix r = symmetrized(mu2.covariance() - t * mu1.covariance() * t.transpose());
    const double lmin = r.rows() > 0 ? min_eigenvalue(r) : 0.0;
    if (lmin < -kSkewPsdTolerance)
        throw NotASkewMap(lmin, "Q2 - T Q1 T^T has eigenvalue " + std::to_string(lmin));
    Matrix clipped = r.rows() > 0 ? clip_to_psd(r) : r;
    SkewTriple triple{t, mu1, mu2, GaussianLaw(clipped), clipped, lmin, 0.0};
    return triple;
}

SkewTriple build_skew_factor_jump(const Matrix& t, const CompoundPoissonLaw& mu1, const CompoundPoissonLaw& mu2,
                                  int probes, std::uint64_t seed)
{
    check_map(t, mu1.dim(), mu2.dim());
    const AtomicLevyMeasure& nu1 = mu1.levy();
    const AtomicLevyMeasure& nu2 = mu2.levy();
    std::vector<double> residual = nu2.weights();
    for (std::size_t j = 0; j < nu1.size(); ++j) {
        const Vector image = t * nu1.atom(j);
        if (image.norm() <= kAtomSnapTolerance)
            continue;
        const int k = nu2.find_atom(image, kAtomSnapTolerance);
        if (k < 0)
            throw AtomMismatch("image of atom " + std::to_string(j) + " is not an atom of the target measure");
        residual[static_cast<std::size_t>(k)] -= nu1.weight(j);
    }
    double wmin = 0.0;
    std::vector<Vector> atoms;
    std::vector<double> weights;
    for (std::size_t k = 0; k < residual.size(); ++k) {
        wmin = std::min(wmin, residual[k]);
        if (residual[k] < -1e-12)
            throw NotASkewMap(residual[k], "target atom " + std::to_string(k) + " has residual weight " +
                                               std::to_string(residual[k]));
        if (residual[k] > 1e-12) {
            atoms.push_back(nu2.atom(k));
            weights.push_back(residual[k]);
        }
    }
    if (!weights.empty())
        wmin = *std::min_element(weights.begin(), weights.end());
    auto levy = std::make_shared<const AtomicLevyMeasure>(mu2.dim(), std::move(atoms), std::move(weights));
    // Drift of rho once jumps are counted raw: b2 - T b1.
    const Vector drift = mu2.effective_drift() - t * mu1.effective_drift();
    CompoundPoissonLaw probe_law(Vector::Zero(mu2.dim()), levy);
    const Vector shift = drift + probe_law.compensator();
    CompoundPoissonLaw rho(shift, levy);
    SkewTriple triple{t, mu1, mu2, rho, std::nullopt, wmin, 0.0};
    triple.shift_defect = (shift - (mu2.shift() - t * mu1.shift())).norm();
    if (probes > 0) {
        const double res = skew_identity_residual(triple, probes, seed);
        if (!(res < 1e-10))
            throw NotASkewMap(res, "characteristic-function identity fails with residual " + std::to_string(res));
    }
    return triple;
}

SkewTriple build_skew_factor(const Matrix& t, const Law& mu1, const Law& mu2)
{
    if (const auto* g1 = std::get_if<GaussianLaw>(&mu1)) {
        if (const auto* g2 = std::get_if<GaussianLaw>(&mu2))
            return build_skew_factor(t, *g1, *g2);
    } else if (const auto* p2 = std::get_if<CompoundPoissonLaw>(&mu2)) {
        return build_skew_factor_jump(t, std::get<CompoundPoissonLaw>(mu1), *p2);
    }
    throw ValidationError("skew pair mixes Gaussian and jump laws");
}

double skew_identity_residual(const SkewTriple& triple, int probes, std::uint64_t seed, double scale)
{
    Rng rng(seed);
    const CharFn mu1 = char_fn(triple.source);
    const CharFn mu2 = char_fn(triple.target);
    const CharFn rho = char_fn(triple.factor);
    const int d2 = static_cast<int>(triple.map.rows());
    double worst = 0.0;
    for (int k = 0; k < probes; ++k) {
        const Vector x = random_probe(rng, d2, scale);
        const Complex lhs = mu1(triple.map.transpose() * x) * rho(x);
        worst = std::max(worst, std::abs(lhs - mu2(x)));
    }
    return worst;
}

Matrix restrict_to_rkhs(const Matrix& t, const GaussianLaw& mu1, const GaussianLaw& mu2)
{
    build_skew_factor(t, mu1, mu2);
    const Matrix image = t * mu1.factor();
    Matrix m(mu2.rank(), mu1.rank());
    for (int c = 0; c < mu1.rank(); ++c)
        m.col(c) = mu2.whiten(image.col(c));
    return m;
}

SkewTriple extend_contraction(const Matrix& m, const GaussianLaw& mu1, const GaussianLaw& mu2)
{
    if (m.rows() != mu2.rank() || m.cols() != mu1.rank())
        throw DimensionMismatch("extend_contraction: M must be rank(Q2) x rank(Q1)");
    const double norm = m.size() > 0 ? spectral_norm(m) : 0.0;
    if (norm > 1.0 + 1e-12)
        throw NotAContraction(norm);
    // j1^+ has rows diag(lambda^-1/2) V^T, reached through whiten on the basis.
    Matrix left_inverse(mu1.rank(), mu1.dim());
    for (int c = 0; c < mu1.dim(); ++c)
        left_inverse.col(c) = mu1.whiten(Vector::Unit(mu1.dim(), c));
    const Matrix t = mu2.factor() * m * left_inverse;
    return build_skew_factor(t, mu1, mu2);
}

double verify_semigroup_law(const Matrix& semigroup_t, const CharFn& mu_s, const CharFn& mu_t,
                            const CharFn& mu_s_plus_t, int probes, std::uint64_t seed, double scale)
{
    if (mu_s.dim() != mu_t.dim() || mu_t.dim() != mu_s_plus_t.dim() || semigroup_t.rows() != mu_t.dim() ||
        semigroup_t.cols() != mu_s.dim())
        throw DimensionMismatch("verify_semigroup_law: inconsistent dimensions");
    Rng rng(seed);
    double worst = 0.0;
    for (int k = 0; k < probes; ++k) {
        const Vector x = random_probe(rng, mu_t.dim(), scale);
        const Complex lhs = mu_s(semigroup_t.transpose() * x) * mu_t(x);
        worst = std::max(worst, std::abs(mu_s_plus_t(x) - lhs));
    }
    return worst;
}

SkewTriple check_self_decomposable(const Matrix& t, const GaussianLaw& mu)
{
    return build_skew_factor(t, mu, mu);
}

SkewTriple check_self_decomposable(const Matrix& t, const CompoundPoissonLaw& mu)
{
    return build_skew_factor_jump(t, mu, mu);
}

} // namespace skewq
