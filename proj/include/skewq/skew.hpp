#pragma once

#include <cstdint>
#include <optional>

#include "skewq/linalg.hpp"
#include "skewq/measures.hpp"

namespace skewq {

/// A linear map T : R^{d1} -> R^{d2} with laws mu1, mu2 and the factor rho
/// completing T(mu1) * rho = mu2.
struct SkewTriple {
    Matrix map;
    Law source;
    Law target;
    Law factor;
    /// Q2 - T Q1 T^T after clipping (Gaussian pairs only).
    std::optional<Matrix> residual_covariance;
    /// Gaussian: lambda_min(Q2 - T Q1 T^T) before clipping.
    /// Jump: smallest residual atom weight (0 when every atom is consumed).
    double min_eigenvalue = 0.0;
    /// Jump pairs: |xi_rho - (xi2 - T xi1)|, i.e. how far the shifts are
    /// from being related by T alone.
    double shift_defect = 0.0;

    bool is_gaussian() const noexcept { return std::holds_alternative<GaussianLaw>(source); }
    const GaussianLaw& gaussian_source() const { return std::get<GaussianLaw>(source); }
    const GaussianLaw& gaussian_target() const { return std::get<GaussianLaw>(target); }
    const GaussianLaw& gaussian_factor() const { return std::get<GaussianLaw>(factor); }
    const CompoundPoissonLaw& jump_source() const { return std::get<CompoundPoissonLaw>(source); }
    const CompoundPoissonLaw& jump_target() const { return std::get<CompoundPoissonLaw>(target); }
    const CompoundPoissonLaw& jump_factor() const { return std::get<CompoundPoissonLaw>(factor); }
};

/// Lambda_min threshold below which Q2 - T Q1 T^T is declared indefinite.
inline constexpr double kSkewPsdTolerance = 1e-9;
/// Distance at which an image atom T y is identified with an atom of nu2.
inline constexpr double kAtomSnapTolerance = 1e-9;

/// Gaussian pair: rho = N(0, Q2 - T Q1 T^T). Throws NotASkewMap when the
/// residual covariance has an eigenvalue below -1e-9.
SkewTriple build_skew_factor(const Matrix& t, const GaussianLaw& mu1, const GaussianLaw& mu2);

/// Jump pair: nu_rho = nu2 - T(nu1) atom by atom (images at the origin are
/// dropped), drift chosen so the characteristic functions match exactly.
/// The identity is re-checked at `probes` random functionals.
SkewTriple build_skew_factor_jump(const Matrix& t, const CompoundPoissonLaw& mu1, const CompoundPoissonLaw& mu2,
                                  int probes = 100, std::uint64_t seed = 0x5eed);

/// Dispatches on the law classes; mixed classes raise ValidationError.
SkewTriple build_skew_factor(const Matrix& t, const Law& mu1, const Law& mu2);

/// max over random probes x* of |mu1^(T^T x*) rho^(x*) - mu2^(x*)|.
double skew_identity_residual(const SkewTriple& triple, int probes, std::uint64_t seed, double scale = 1.0);

/// Matrix of T restricted to H1 -> H2 in factor coordinates: j2^+ T j1.
Matrix restrict_to_rkhs(const Matrix& t, const GaussianLaw& mu1, const GaussianLaw& mu2);

/// Realises an r2 x r1 contraction M as T = j2 M j1^+ and builds its triple.
/// Throws NotAContraction when |M| > 1 + 1e-12.
SkewTriple extend_contraction(const Matrix& m, const GaussianLaw& mu1, const GaussianLaw& mu2);

/// max over random probes of |mu_{s+t}^(x*) - mu_s^(S(t)^T x*) mu_t^(x*)|.
double verify_semigroup_law(const Matrix& semigroup_t, const CharFn& mu_s, const CharFn& mu_t,
                            const CharFn& mu_s_plus_t, int probes = 50, std::uint64_t seed = 0x5eed,
                            double scale = 1.0);

/// mu = T mu * rho.
SkewTriple check_self_decomposable(const Matrix& t, const GaussianLaw& mu);
SkewTriple check_self_decomposable(const Matrix& t, const CompoundPoissonLaw& mu);

} // namespace skewq
