#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "skewq/linalg.hpp"
#include "skewq/measures.hpp"
#include "skewq/rng.hpp"
#include "skewq/skew.hpp"
#include "skewq/test_function.hpp"

namespace skewq {

/// dY = A Y dt + dL with L either Brownian with covariance B per unit time,
/// or compound Poisson with jump intensity nu and shift b per unit time.
class OUSystem {
public:
    static OUSystem gaussian(Matrix drift, Matrix diffusion);
    static OUSystem jump(Matrix drift, AtomicLevyMeasure levy, Vector shift);

    int dim() const noexcept { return static_cast<int>(drift_.rows()); }
    bool is_gaussian() const noexcept { return !levy_; }
    const Matrix& drift() const noexcept { return drift_; }
    const Matrix& diffusion() const noexcept { return diffusion_; }
    const AtomicLevyMeasure& levy() const { return *levy_; }
    const Vector& shift() const noexcept { return shift_; }
    /// Law of L(1) (jump driver only).
    CompoundPoissonLaw unit_increment() const;

    /// S(t) = exp(tA).
    Matrix semigroup(double t) const;

private:
    OUSystem() = default;

    Matrix drift_;
    Matrix diffusion_;
    std::shared_ptr<const AtomicLevyMeasure> levy_;
    Vector shift_;
};

/// Law of the stochastic convolution. Gaussian drivers carry the covariance
/// explicitly; jump drivers only through the characteristic function.
struct OULaw {
    CharFn char_fn;
    std::optional<GaussianLaw> gaussian;
};

/// Default absolute tolerance for time integrals of the Levy symbol.
inline constexpr double kTimeQuadratureTolerance = 1e-10;

/// mu_t, the law of int_0^t S(t-u) dL(u).
OULaw marginal_law(const OUSystem& sys, double t, double tol = kTimeQuadratureTolerance);

/// Residual of mu_{s+t} = S(t) mu_s * mu_t.
double verify_skew_semigroup(const OUSystem& sys, double s, double t, int probes = 50, std::uint64_t seed = 0x5eed,
                             double scale = 1.0, double tol = kTimeQuadratureTolerance);

/// Stability threshold on the spectral abscissa of A.
inline constexpr double kStabilityMargin = 1e-8;

/// Solves A Q + Q A^T + B = 0.
Matrix solve_lyapunov(const Matrix& drift, const Matrix& diffusion);
double lyapunov_residual(const Matrix& drift, const Matrix& diffusion, const Matrix& q);

/// The invariant law. Throws NotStable unless the spectral abscissa of A is
/// below -1e-8.
OULaw invariant_law(const OUSystem& sys, double tol = kTimeQuadratureTolerance);

/// max over probes of |mu_inf^(x*) - mu_inf^(S(t)^T x*) mu_t^(x*)|.
double self_decomposability_residual(const OUSystem& sys, const OULaw& invariant, double t, int probes = 50,
                                     std::uint64_t seed = 0x5eed, double scale = 1.0);

struct OUPath {
    std::vector<double> times;
    std::vector<Vector> states;
};

/// Exact-in-law stepping on an increasing time grid starting at times[0]
/// with Y(times[0]) = y0.
OUPath simulate_path(const OUSystem& sys, const Vector& y0, const std::vector<double>& times, Rng& rng);

/// Y(times.back()) for `count` independent paths, one row per path.
SampleBatch simulate_endpoints(const OUSystem& sys, const Vector& y0, const std::vector<double>& times,
                               std::size_t count, std::uint64_t seed, unsigned workers = 1);

/// CSV with header t,y0,y1,...
void write_path_csv(std::ostream& out, const OUPath& path);

/// P_t f(x) = E f(S(t) x + Y_t), Y_t ~ mu_t, for trigonometric f.
TestFunction ou_mehler_transform(const OUSystem& sys, double t, const TestFunction& f);

/// max over probe points of |P_s P_t f - P_{s+t} f| for trigonometric f.
double chapman_kolmogorov_residual(const OUSystem& sys, double s, double t, const TestFunction& f, int probes = 20,
                                   std::uint64_t seed = 0x5eed);

/// |E_inf P_t f - E_inf f| for trigonometric f under the invariant law.
double invariant_fixed_point_residual(const OUSystem& sys, const OULaw& invariant, double t, const TestFunction& f);

} // namespace skewq
