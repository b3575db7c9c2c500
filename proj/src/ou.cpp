#include "skewq/ou.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <string>

#include "skewq/error.hpp"
#include "skewq/mehler.hpp"
#include "skewq/quadrature.hpp"

namespace skewq {

namespace {

// exp(uA) through a complex eigendecomposition when it is well conditioned,
// otherwise through the Pade exponential.
class SemigroupEvaluator {
public:
    explicit SemigroupEvaluator(const Matrix& a) : a_(a)
    {
        if (a.rows() == 0)
            return;
        Eigen::EigenSolver<Matrix> solver(a);
        if (solver.info() != Eigen::Success)
            return;
        const Eigen::MatrixXcd v = solver.eigenvectors();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
        const auto s = svd.singularValues();
        if (s(s.size() - 1) <= 1e-6 * s(0))
            return;
        vectors_ = v;
        inverse_ = v.inverse();
        values_ = solver.eigenvalues();
        diagonal_ = true;
    }

    Matrix operator()(double u) const
    {
        if (!diagonal_)
            return matrix_exponential(u * a_);
        Eigen::VectorXcd e = (u * values_).array().exp();
        return (vectors_ * e.asDiagonal() * inverse_).real();
    }

private:
    Matrix a_;
    bool diagonal_ = false;
    Eigen::MatrixXcd vectors_;
    Eigen::MatrixXcd inverse_;
    Eigen::VectorXcd values_;
};

Matrix van_loan_covariance(const Matrix& a, const Matrix& b, double t)
{
    const Eigen::Index d = a.rows();
    Matrix block = Matrix::Zero(2 * d, 2 * d);
    block.topLeftCorner(d, d) = -a;
    block.topRightCorner(d, d) = b;
    block.bottomRightCorner(d, d) = a.transpose();
    const Matrix f = matrix_exponential(t * block);
    return symmetrized(f.bottomRightCorner(d, d).transpose() * f.topRightCorner(d, d));
}

// int_0^t exp(vA) dv.
Matrix integrated_semigroup(const Matrix& a, double t)
{
    const Eigen::Index d = a.rows();
    Matrix block = Matrix::Zero(2 * d, 2 * d);
    block.topLeftCorner(d, d) = a;
    block.topRightCorner(d, d) = Matrix::Identity(d, d);
    return matrix_exponential(t * block).topRightCorner(d, d);
}

Complex log_char_integral(const CompoundPoissonLaw& unit, const SemigroupEvaluator& s, const Vector& x, double a,
                          double b, double tol)
{
    if (b <= a)
        return 0.0;
    return adaptive_simpson([&](double u) { return unit.levy_symbol(s(u).transpose() * x); }, a, b, tol);
}

double symbol_lipschitz(const CompoundPoissonLaw& unit)
{
    double c = unit.effective_drift().norm();
    const AtomicLevyMeasure& levy = unit.levy();
    for (std::size_t j = 0; j < levy.size(); ++j)
        c += levy.weight(j) * levy.atom(j).norm();
    return c;
}

void check_time(double t, const char* what)
{
    if (!(t >= 0.0) || !std::isfinite(t))
        throw ValidationError(std::string(what) + ": time must be finite and non-negative");
}

struct StepKernel {
    double dt;
    Matrix transition;
    std::optional<GaussianLaw> noise;
    Vector drift;
};

std::vector<StepKernel> step_kernels(const OUSystem& sys, const std::vector<double>& times)
{
    if (times.empty())
        throw ValidationError("simulate_path: empty time grid");
    std::vector<StepKernel> steps;
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double dt = times[k] - times[k - 1];
        if (!(dt > 0.0))
            throw ValidationError("simulate_path: time grid must be strictly increasing");
        StepKernel st{dt, sys.semigroup(dt), std::nullopt, Vector::Zero(sys.dim())};
        if (sys.is_gaussian())
            st.noise.emplace(van_loan_covariance(sys.drift(), sys.diffusion(), dt));
        else
            st.drift = integrated_semigroup(sys.drift(), dt) * sys.unit_increment().effective_drift();
        steps.push_back(std::move(st));
    }
    return steps;
}

Vector advance(const OUSystem& sys, const SemigroupEvaluator& s, const StepKernel& st, const Vector& y, Rng& rng)
{
    Vector next = st.transition * y;
    if (st.noise) {
        const GaussianLaw& g = *st.noise;
        if (g.rank() > 0) {
            std::normal_distribution<double> normal;
            Vector z(g.rank());
            for (Eigen::Index i = 0; i < z.size(); ++i)
                z(i) = normal(rng);
            next += g.factor() * z;
        }
        return next;
    }
    next += st.drift;
    const AtomicLevyMeasure& levy = sys.levy();
    std::uniform_real_distribution<double> uniform(0.0, st.dt);
    for (std::size_t j = 0; j < levy.size(); ++j) {
        std::poisson_distribution<int> count(levy.weight(j) * st.dt);
        const int n = count(rng);
        for (int k = 0; k < n; ++k)
            next += s(st.dt - uniform(rng)) * levy.atom(j);
    }
    return next;
}

} // namespace

OUSystem OUSystem::gaussian(Matrix drift, Matrix diffusion)
{
    if (drift.rows() != drift.cols() || diffusion.rows() != drift.rows() || diffusion.cols() != drift.rows())
        throw DimensionMismatch("OUSystem: drift and diffusion must be square of equal size");
    GaussianLaw check(diffusion);
    OUSystem sys;
    sys.drift_ = std::move(drift);
    sys.diffusion_ = check.covariance();
    return sys;
}

OUSystem OUSystem::jump(Matrix drift, AtomicLevyMeasure levy, Vector shift)
{
    if (drift.rows() != drift.cols() || levy.dim() != drift.rows() || shift.size() != drift.rows())
        throw DimensionMismatch("OUSystem: drift, jumps and shift must share one dimension");
    OUSystem sys;
    sys.drift_ = std::move(drift);
    sys.levy_ = std::make_shared<const AtomicLevyMeasure>(std::move(levy));
    sys.shift_ = std::move(shift);
    return sys;
}

CompoundPoissonLaw OUSystem::unit_increment() const
{
    if (!levy_)
        throw ValidationError("unit_increment: Gaussian driver has no jump law");
    return CompoundPoissonLaw(shift_, levy_);
}

Matrix OUSystem::semigroup(double t) const
{
    return matrix_exponential(t * drift_);
}

OULaw marginal_law(const OUSystem& sys, double t, double tol)
{
    check_time(t, "marginal_law");
    if (sys.is_gaussian()) {
        GaussianLaw g(clip_to_psd(van_loan_covariance(sys.drift(), sys.diffusion(), t)));
        return OULaw{char_fn(g), std::move(g)};
    }
    auto unit = std::make_shared<const CompoundPoissonLaw>(sys.unit_increment());
    auto s = std::make_shared<const SemigroupEvaluator>(sys.drift());
    return OULaw{CharFn(sys.dim(),
                        [unit, s, t, tol](const Vector& x) {
                            return std::exp(log_char_integral(*unit, *s, x, 0.0, t, tol));
                        }),
                 std::nullopt};
}

double verify_skew_semigroup(const OUSystem& sys, double s, double t, int probes, std::uint64_t seed, double scale,
                             double tol)
{
    check_time(s, "verify_skew_semigroup");
    check_time(t, "verify_skew_semigroup");
    const OULaw ms = marginal_law(sys, s, tol);
    const OULaw mt = marginal_law(sys, t, tol);
    const OULaw mst = marginal_law(sys, s + t, tol);
    return verify_semigroup_law(sys.semigroup(t), ms.char_fn, mt.char_fn, mst.char_fn, probes, seed, scale);
}

Matrix solve_lyapunov(const Matrix& drift, const Matrix& diffusion)
{
    const Eigen::Index d = drift.rows();
    const Matrix id = Matrix::Identity(d, d);
    // vec(AQ + QA^T) = (I (x) A + A (x) I) vec Q, column-major vec.
    Matrix k = Matrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            k.block(i * d, j * d, d, d) += id(i, j) * drift;
            k.block(i * d, j * d, d, d) += drift(i, j) * id;
        }
    const Vector rhs = -Eigen::Map<const Vector>(diffusion.data(), d * d);
    const Vector q = k.fullPivLu().solve(rhs);
    return symmetrized(Eigen::Map<const Matrix>(q.data(), d, d));
}

double lyapunov_residual(const Matrix& drift, const Matrix& diffusion, const Matrix& q)
{
    return max_abs(drift * q + q * drift.transpose() + diffusion);
}

OULaw invariant_law(const OUSystem& sys, double tol)
{
    const double abscissa = spectral_abscissa(sys.drift());
    if (!(abscissa < -kStabilityMargin))
        throw NotStable(abscissa);
    if (sys.is_gaussian()) {
        GaussianLaw g(clip_to_psd(solve_lyapunov(sys.drift(), sys.diffusion())));
        return OULaw{char_fn(g), std::move(g)};
    }
    auto unit = std::make_shared<const CompoundPoissonLaw>(sys.unit_increment());
    auto s = std::make_shared<const SemigroupEvaluator>(sys.drift());
    const double lipschitz = symbol_lipschitz(*unit);
    return OULaw{CharFn(sys.dim(),
                        [unit, s, tol, lipschitz](const Vector& x) {
                            // Unit intervals until the remaining tail is below tol.
                            Complex total = 0.0;
                            const double xn = x.norm();
                            for (int k = 0; k < 100000; ++k) {
                                const double bound = lipschitz * xn * spectral_norm((*s)(k));
                                if (bound < 1e-3 * tol && k > 0)
                                    break;
                                total += log_char_integral(*unit, *s, x, k, k + 1.0, tol);
                            }
                            return std::exp(total);
                        }),
                 std::nullopt};
}

double self_decomposability_residual(const OUSystem& sys, const OULaw& invariant, double t, int probes,
                                     std::uint64_t seed, double scale)
{
    const OULaw mt = marginal_law(sys, t);
    return verify_semigroup_law(sys.semigroup(t), invariant.char_fn, mt.char_fn, invariant.char_fn, probes, seed,
                                scale);
}

OUPath simulate_path(const OUSystem& sys, const Vector& y0, const std::vector<double>& times, Rng& rng)
{
    if (y0.size() != sys.dim())
        throw DimensionMismatch("simulate_path: initial state has the wrong dimension");
    const auto steps = step_kernels(sys, times);
    const SemigroupEvaluator s(sys.drift());
    OUPath path{times, {y0}};
    for (const StepKernel& st : steps)
        path.states.push_back(advance(sys, s, st, path.states.back(), rng));
    return path;
}

SampleBatch simulate_endpoints(const OUSystem& sys, const Vector& y0, const std::vector<double>& times,
                               std::size_t count, std::uint64_t seed, unsigned workers)
{
    if (y0.size() != sys.dim())
        throw DimensionMismatch("simulate_endpoints: initial state has the wrong dimension");
    const auto steps = step_kernels(sys, times);
    const SemigroupEvaluator s(sys.drift());
    SampleBatch out(static_cast<Eigen::Index>(count), sys.dim());
    parallel_chunks(count, workers, seed, [&](Rng& rng, std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            Vector y = y0;
            for (const StepKernel& st : steps)
                y = advance(sys, s, st, y, rng);
            out.row(static_cast<Eigen::Index>(p)) = y.transpose();
        }
    });
    return out;
}

void write_path_csv(std::ostream& out, const OUPath& path)
{
    const int d = path.states.empty() ? 0 : static_cast<int>(path.states.front().size());
    out << "t";
    for (int i = 0; i < d; ++i)
        out << ",y" << i;
    out << '\n' << std::setprecision(17);
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        out << path.times[k];
        for (int i = 0; i < d; ++i)
            out << ',' << path.states[k](i);
        out << '\n';
    }
}

TestFunction ou_mehler_transform(const OUSystem& sys, double t, const TestFunction& f)
{
    if (f.kind() != TestFunction::Kind::trigonometric)
        throw UnsupportedQuadrature("ou_mehler_transform: only trigonometric functions are transformed exactly");
    return mehler_transform(sys.semigroup(t), marginal_law(sys, t).char_fn, f);
}

double chapman_kolmogorov_residual(const OUSystem& sys, double s, double t, const TestFunction& f, int probes,
                                   std::uint64_t seed)
{
    const TestFunction two_step = ou_mehler_transform(sys, s, ou_mehler_transform(sys, t, f));
    const TestFunction one_step = ou_mehler_transform(sys, s + t, f);
    Rng rng(seed);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    Vector x(sys.dim());
    for (int p = 0; p < probes; ++p) {
        for (Eigen::Index i = 0; i < x.size(); ++i)
            x(i) = normal(rng);
        worst = std::max(worst, std::abs(two_step(x) - one_step(x)));
    }
    return worst;
}

double invariant_fixed_point_residual(const OUSystem& sys, const OULaw& invariant, double t, const TestFunction& f)
{
    auto mean = [&](const TestFunction& g) {
        Complex e = 0.0;
        for (std::size_t k = 0; k < g.coefficients().size(); ++k)
            e += g.coefficients()[k] * invariant.char_fn(g.frequencies()[k]);
        return e;
    };
    return std::abs(mean(ou_mehler_transform(sys, t, f)) - mean(f));
}

} // namespace skewq
