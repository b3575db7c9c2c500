#include "skewq/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "skewq/error.hpp"
#include "skewq/families.hpp"
#include "skewq/gauss_chaos.hpp"
#include "skewq/mehler.hpp"
#include "skewq/multiset.hpp"
#include "skewq/ou.hpp"
#include "skewq/poisson_chaos.hpp"
#include "skewq/skew.hpp"

namespace skewq {

namespace {

using Clock = std::chrono::steady_clock;

class Params {
public:
    explicit Params(const Json& j) : j_(j) {}
    bool has(const char* key) const { return j_.contains(key); }
    const Json& at(const char* key) const { return j_.at(key); }
    double real(const char* key, double fallback) const
    {
        return j_.contains(key) ? j_.at(key).get<double>() : fallback;
    }
    int count(const char* key, int fallback) const
    {
        return j_.contains(key) ? static_cast<int>(j_.at(key).get<std::uint64_t>()) : fallback;
    }

private:
    const Json& j_;
};

class Rows {
public:
    Rows(Report& report, std::uint64_t seed) : report_(report), seed_(seed), mark_(Clock::now()) {}

    void add(std::string name, double lhs, double rhs, double residual, double tol, std::string method)
    {
        const auto now = Clock::now();
        ReportRow row;
        row.name = std::move(name);
        row.lhs = lhs;
        row.rhs = rhs;
        row.residual = residual;
        row.tolerance = tol;
        row.pass = residual <= tol;
        row.method = std::move(method);
        row.seed = seed_;
        row.runtime_ms = std::chrono::duration<double, std::milli>(now - mark_).count();
        report_.rows.push_back(std::move(row));
        mark_ = now;
    }
    void small(std::string name, double value, double tol, std::string method)
    {
        add(std::move(name), value, 0.0, value, tol, std::move(method));
    }
    void at_most(std::string name, double lhs, double rhs, double tol, std::string method)
    {
        add(std::move(name), lhs, rhs, lhs - rhs, tol, std::move(method));
    }
    void at_least(std::string name, double lhs, double rhs, double tol, std::string method)
    {
        add(std::move(name), lhs, rhs, rhs - lhs, tol, std::move(method));
    }

private:
    Report& report_;
    std::uint64_t seed_;
    Clock::time_point mark_;
};

// Worst case over a family: keeps the sides of the largest residual.
struct Worst {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = -std::numeric_limits<double>::infinity();
    bool any = false;

    void take(double l, double r, double res)
    {
        if (!any || res > residual || std::isnan(res)) {
            if (std::isnan(residual) && any)
                return;
            lhs = l;
            rhs = r;
            residual = res;
        }
        any = true;
    }
    void take(double value) { take(value, 0.0, value); }
    double value() const { return any ? residual : 0.0; }
};

void add_worst(Rows& rows, const std::string& name, const Worst& w, double tol, const std::string& method)
{
    rows.add(name, w.any ? w.lhs : 0.0, w.any ? w.rhs : 0.0, w.value(), tol, method);
}

struct ExplicitTriple {
    Matrix map;
    Law source;
    Law target;
};

std::optional<ExplicitTriple> explicit_triple(const Params& p)
{
    if (!p.has("map"))
        return std::nullopt;
    return ExplicitTriple{parse_matrix(p.at("map"), "params.map"), parse_law(p.at("source"), "params.source"),
                          parse_law(p.at("target"), "params.target")};
}

std::vector<Vector> sample_points(const Law& law, std::uint64_t seed, int count)
{
    const SampleBatch batch = sample(law, seed, static_cast<std::size_t>(count));
    std::vector<Vector> out;
    for (Eigen::Index k = 0; k < batch.rows(); ++k)
        out.push_back(batch.row(k).transpose());
    return out;
}

std::vector<Vector> normal_points(Draw& draw, int dim, int count)
{
    std::vector<Vector> out;
    for (int k = 0; k < count; ++k)
        out.push_back(draw.normal_vector(dim));
    return out;
}

// --- suites -----------------------------------------------------------------

void skew_factor_suite(const Scenario& s, const Params& p, Rows& rows)
{
    const int probes = p.count("probes", 100);
    const double tol = p.real("tolerance", 1e-10);
    if (auto ex = explicit_triple(p)) {
        const SkewTriple tr = build_skew_factor(ex->map, ex->source, ex->target);
        rows.small("identity", skew_identity_residual(tr, probes, s.seed), tol, "probes");
        if (tr.is_gaussian())
            rows.at_least("factor_min_eigenvalue", tr.min_eigenvalue, -kSkewPsdTolerance, 0.0, "eigen");
        return;
    }
    Draw draw(derive_seed(s.seed, 0));
    const int max_dim = p.count("max_dim", 6);
    Worst identity;
    for (int i = 0; i < p.count("valid", 50); ++i) {
        const SkewTriple tr = random_gaussian_triple(draw, max_dim);
        identity.take(skew_identity_residual(tr, probes, derive_seed(s.seed, 1000 + static_cast<std::uint64_t>(i))));
    }
    add_worst(rows, "valid_identity", identity, tol, "probes");

    const int invalid = p.count("invalid", 50);
    int rejected = 0;
    for (int i = 0; i < invalid; ++i) {
        const GaussianLaw mu1 = random_gaussian(draw, draw.integer(1, max_dim), true);
        const GaussianLaw mu2 = random_gaussian(draw, draw.integer(1, max_dim), false);
        const Matrix t = scaled_map(draw, mu1, mu2, draw.uniform(1.5, 4.0));
        try {
            build_skew_factor(t, mu1, mu2);
        } catch (const NotASkewMap&) {
            ++rejected;
        }
    }
    rows.at_least("invalid_rejected", rejected, invalid, 0.0, "eigen");

    Worst jump;
    for (int i = 0; i < p.count("jump_valid", 10); ++i) {
        const SkewTriple tr = random_jump_triple(draw);
        jump.take(skew_identity_residual(tr, probes, derive_seed(s.seed, 2000 + static_cast<std::uint64_t>(i))));
    }
    add_worst(rows, "jump_identity", jump, tol, "probes");
}

void rkhs_suite(const Scenario& s, const Params& p, Rows& rows)
{
    const double tol = p.real("tolerance", 1e-9);
    const double rt_tol = p.real("round_trip_tolerance", 1e-10);
    std::vector<SkewTriple> triples;
    if (auto ex = explicit_triple(p))
        triples.push_back(build_skew_factor(ex->map, ex->source, ex->target));
    Draw draw(derive_seed(s.seed, 0));
    for (int i = 0; i < p.count("count", 50); ++i)
        triples.push_back(random_gaussian_triple(draw, p.count("max_dim", 6)));
    Worst norm, round_trip, agree;
    for (const SkewTriple& tr : triples) {
        if (!tr.is_gaussian())
            throw ValidationError("rkhs_restriction needs Gaussian laws");
        const GaussianLaw& g1 = tr.gaussian_source();
        const GaussianLaw& g2 = tr.gaussian_target();
        const Matrix m = restrict_to_rkhs(tr.map, g1, g2);
        const double n = spectral_norm(m);
        norm.take(n, 1.0, n - 1.0);
        const SkewTriple back = extend_contraction(m, g1, g2);
        const Matrix m2 = restrict_to_rkhs(back.map, g1, g2);
        round_trip.take(max_abs(m2 * m2.transpose() - m * m.transpose()));
        agree.take(max_abs((back.map - tr.map) * g1.factor()));
    }
    add_worst(rows, "restriction_norm", norm, tol, "svd");
    add_worst(rows, "round_trip_gram", round_trip, rt_tol, "svd");
    add_worst(rows, "extension_on_support", agree, rt_tol, "svd");
}

void contraction_suite(const Scenario& s, const Params& p, Rows& rows, unsigned workers)
{
    const auto samples = static_cast<std::size_t>(p.count("samples", 100000));
    const double sigmas = p.real("sigmas", 3.0);
    const double exact_tol = p.real("exact_tolerance", 1e-10);
    const int functions = p.count("functions", 10);
    Draw draw(derive_seed(s.seed, 0));
    std::vector<SkewTriple> triples;
    if (auto ex = explicit_triple(p))
        triples.push_back(build_skew_factor(ex->map, ex->source, ex->target));
    for (int i = 0; i < p.count("gaussian_triples", 10); ++i)
        triples.push_back(random_gaussian_triple(draw, p.count("max_dim", 3)));
    for (int i = 0; i < p.count("jump_triples", 10); ++i)
        triples.push_back(random_jump_triple(draw));
    Worst mc, exact_poly, exact_trig;
    std::uint64_t stream = 10000;
    for (const SkewTriple& tr : triples) {
        const int d2 = law_dim(tr.target);
        for (int m = 0; m < functions; ++m) {
            const bool poly = m % 2 == 1;
            const TestFunction f = poly ? TestFunction::from_polynomial(
                                              random_polynomial(draw, d2, draw.integer(1, 3), 4))
                                        : random_trigonometric(draw, d2, draw.integer(1, 3));
            const ContractionCheck c = mehler_contraction_residual(tr, f, 2.0, samples, derive_seed(s.seed, stream++),
                                                                   workers);
            const double se = std::hypot(c.lhs.std_error, c.rhs.std_error);
            const double bound = c.rhs.value + sigmas * se;
            mc.take(c.lhs.value, bound, c.lhs.value - bound);
            const double a = l2_norm(mehler_transform(tr, f), tr.source);
            const double b = l2_norm(f, tr.target);
            (poly ? exact_poly : exact_trig).take(a, b, a - b);
        }
    }
    add_worst(rows, "mc_norm_inequality", mc, 1e-12, "monte_carlo");
    add_worst(rows, "exact_norm_inequality_polynomial", exact_poly, exact_tol, "moments");
    add_worst(rows, "exact_norm_inequality_trigonometric", exact_trig, exact_tol, "char_fn");
}

void identity_suite(const Scenario& s, const Params& p, Rows& rows)
{
    const int functionals = p.count("functionals", 10);
    const int probes = p.count("probes", 50);
    Draw draw(derive_seed(s.seed, 0));
    std::vector<SkewTriple> triples;
    if (auto ex = explicit_triple(p))
        triples.push_back(build_skew_factor(ex->map, ex->source, ex->target));
    for (int i = 0; i < p.count("gaussian_triples", 5); ++i)
        triples.push_back(random_gaussian_triple(draw, p.count("max_dim", 4)));
    for (int i = 0; i < p.count("jump_triples", 5); ++i)
        triples.push_back(random_jump_triple(draw));
    Worst gauss, jump;
    for (const SkewTriple& tr : triples) {
        const auto pts = normal_points(draw, static_cast<int>(tr.map.cols()), probes);
        for (int k = 0; k < functionals; ++k) {
            const Vector x = draw.normal_vector(static_cast<int>(tr.map.rows()));
            (tr.is_gaussian() ? gauss : jump).take(verify_identityPTK(tr, x, pts));
        }
    }
    add_worst(rows, "gaussian_identity", gauss, p.real("gaussian_tolerance", 1e-9), "gauss_hermite");
    add_worst(rows, "jump_identity", jump, p.real("jump_tolerance", 1e-8), "poisson_sum");
}

void chaos_isometry_suite(const Scenario& s, const Params& p, Rows& rows)
{
    const int max_degree = p.count("max_degree", 4);
    const double tol = p.real("tolerance", 1e-9);
    Draw draw(derive_seed(s.seed, 0));
    for (int d = 1; d <= p.count("max_dim", 3); ++d) {
        const std::string tag = "_d" + std::to_string(d);
        for (int variant = 0; variant < 2; ++variant) {
            const GaussianLaw law = variant == 0 ? GaussianLaw(Matrix::Identity(d, d)) : random_gaussian(draw, d, true);
            const IsometryResidual r = chaos_isometry_check(law, max_degree);
            const std::string name = tag + (variant == 0 ? "_identity" : "_random");
            rows.small("isometry" + name, r.isometry, tol, "gauss_hermite");
            rows.small("orthogonality" + name, r.orthogonality, tol, "gauss_hermite");
        }
    }
}

void stroock_suite(const Scenario& s, const Params& p, Rows& rows)
{
    const int max_degree = p.count("max_degree", 4);
    const int truncation = p.count("truncation", max_degree);
    const int max_dim = p.count("max_dim", 3);
    Draw draw(derive_seed(s.seed, 0));
    Worst poly, exp;
    for (int i = 0; i < p.count("polynomials", 20); ++i) {
        const GaussianLaw law = random_gaussian(draw, draw.integer(1, max_dim), true);
        poly.take(stroock_l2_residual(random_cylindrical_polynomial(draw, law, draw.integer(0, max_degree), 5),
                                      truncation));
    }
    const double h_norm = p.real("h_norm", 0.5);
    for (int i = 0; i < p.count("exponentials", 5); ++i) {
        const GaussianLaw law = random_gaussian(draw, draw.integer(1, max_dim), true);
        const Vector h = draw.vector_with_norm(law.rank(), h_norm);
        exp.take(stroock_l2_residual(CylindricalFunction::exponential_vector(law, h), p.count("exp_truncation", 8)));
    }
    add_worst(rows, "polynomial_reconstruction", poly, p.real("exact_tolerance", 1e-10), "gauss_hermite");
    add_worst(rows, "exponential_reconstruction", exp, p.real("exp_tolerance", 1e-4), "gauss_hermite");
}

void gaussian_diagram_suite(const Scenario& s, const Params& p, Rows& rows)
{
    const int truncation = p.count("truncation", 8);
    const int probes = p.count("probes", 10);
    const double h_norm = p.real("h_norm", 0.5);
    Draw draw(derive_seed(s.seed, 0));
    std::vector<SkewTriple> triples;
    if (auto ex = explicit_triple(p))
        triples.push_back(build_skew_factor(ex->map, ex->source, ex->target));
    for (int i = 0; i < p.count("random_triples", 0); ++i)
        triples.push_back(random_gaussian_triple(draw, p.count("max_dim", 3)));
    std::map<std::string, std::pair<Worst, Worst>> by_class;
    Worst route;
    std::uint64_t stream = 100;
    for (const SkewTriple& tr : triples) {
        if (!tr.is_gaussian())
            throw ValidationError("gaussian_diagram needs Gaussian laws");
        const GaussianLaw& g1 = tr.gaussian_source();
        const GaussianLaw& g2 = tr.gaussian_target();
        const auto pts = sample_points(tr.source, derive_seed(s.seed, stream++), probes);
        auto check = [&](const std::string& cls, const CylindricalFunction& f) {
            const DiagramResidual r = verify_gaussian_diagram(tr, f, truncation, pts);
            by_class[cls].first.take(r.coefficient);
            by_class[cls].second.take(r.reconstruction);
        };
        check("exponential_vector", CylindricalFunction::exponential_vector(g2, draw.vector_with_norm(g2.rank(), h_norm)));
        for (int k = 0; k < 2; ++k)
            check("polynomial", random_cylindrical_polynomial(draw, g2, 3, 5));
        const Vector xk = g2.functional_for(draw.vector_with_norm(g2.rank(), h_norm));
        check("exp_martingale", CylindricalFunction::exp_martingale(g2, xk));

        // P_T K_{mu2,x*} = K_{mu1,T^T x*} reached through the lifted coefficients.
        const Vector xr = g2.functional_for(draw.vector_with_norm(g2.rank(), draw.uniform(0.1, h_norm)));
        const ChaosCoefficients lifted =
            second_quantised(tr, stroock_coefficients(CylindricalFunction::exp_martingale(g2, xr),
                                                      p.count("route_truncation", 10)));
        const ExpMartingaleVector k1 = exp_martingale(tr.source, tr.map.transpose() * xr);
        for (const Vector& x : pts)
            route.take(std::abs(chaos_evaluate(lifted, g1, x) - k1(x)));
    }
    for (const auto& [cls, w] : by_class) {
        add_worst(rows, "coefficient_" + cls, w.first, p.real("coefficient_tolerance", 1e-8), "gauss_hermite");
        add_worst(rows, "reconstruction_" + cls, w.second, p.real("reconstruction_tolerance", 1e-4), "gauss_hermite");
    }
    add_worst(rows, "identityPTK_chaos_route", route, p.real("route_tolerance", 1e-6), "chaos");
}

void poisson_chaos_suite(const Scenario& s, const Params& p, Rows& rows)
{
    const int max_degree = p.count("max_degree", 3);
    const double tol = p.real("tolerance", 1e-9);
    Draw draw(derive_seed(s.seed, 0));
    Worst iso, orth, recon, lp_iso, product;
    for (int c = 0; c < p.count("cases", 6); ++c) {
        const int m = 1 + c % p.count("max_atoms", 3);
        const int dim = 1 + (c / 3) % 2;
        auto levy = std::make_shared<const AtomicLevyMeasure>(random_levy(draw, dim, m));
        const CompoundPoissonLaw law(draw.normal_vector(dim), levy);

        const PoissonIntegralIsometry r = poisson_isometry_check(levy, max_degree);
        iso.take(r.isometry);
        orth.take(r.orthogonality);

        const ConfigFunction f = ConfigFunction::count_polynomial(levy, random_polynomial(draw, m, max_degree, 5));
        const PoissonIsometry lp = last_penrose_isometry(f, max_degree);
        const double scale = std::max(1.0, lp.norm_squared);
        recon.take(last_penrose_l2_residual(f, max_degree) / std::sqrt(scale));
        lp_iso.take(std::abs(lp.norm_squared - lp.chaos_squared) / scale);

        const Vector xs = draw.normal_vector(dim);
        const ConfigFunction k = ConfigFunction::pullback(law, TestFunction::trigonometric(dim, {1.0}, {xs}));
        const auto kernels = last_penrose_kernels(k, max_degree);
        const Complex mean = law.char_fn(xs);
        for (int n = 0; n <= max_degree; ++n) {
            const MultisetIndex& idx = multiset_index(m, n);
            for (std::size_t a = 0; a < idx.size(); ++a) {
                std::vector<Vector> pts;
                for (int atom : idx.indices(a))
                    pts.push_back(levy->atom(static_cast<std::size_t>(atom)));
                product.take(std::abs(kernels[static_cast<std::size_t>(n)][a] - mean * product_exponential(pts, xs)));
            }
        }
    }
    add_worst(rows, "integral_isometry", iso, tol, "poisson_sum");
    add_worst(rows, "integral_orthogonality", orth, tol, "poisson_sum");
    add_worst(rows, "polynomial_reconstruction_rel", recon, tol, "poisson_sum");
    add_worst(rows, "expansion_isometry_rel", lp_iso, tol, "poisson_sum");
    add_worst(rows, "exponential_product_formula", product, tol, "poisson_sum");
}

void poisson_diagram_suite(const Scenario& s, const Params& p, Rows& rows)
{
    const int truncation = p.count("truncation", 3);
    const double tol = p.real("tolerance", 1e-8);
    Draw draw(derive_seed(s.seed, 0));
    std::vector<SkewTriple> triples;
    if (auto ex = explicit_triple(p))
        triples.push_back(build_skew_factor(ex->map, ex->source, ex->target));
    for (int i = 0; i < p.count("triples", 10); ++i)
        triples.push_back(random_jump_triple(draw));
    Worst k_class, trig, norm_ineq, tilde;
    for (const SkewTriple& tr : triples) {
        if (tr.is_gaussian())
            throw ValidationError("poisson_diagram needs compound Poisson laws");
        const CompoundPoissonLaw& mu1 = tr.jump_source();
        const CompoundPoissonLaw& mu2 = tr.jump_target();
        const int d2 = mu2.dim();
        const TestFunction k = exp_martingale(tr.target, draw.normal_vector(d2)).as_function();
        const TestFunction g = random_trigonometric(draw, d2, 2);
        k_class.take(verify_poisson_diagram(tr, k, truncation));
        trig.take(verify_poisson_diagram(tr, g, truncation));
        for (const TestFunction* f : {&k, &g}) {
            const auto kernels = last_penrose_kernels(ConfigFunction::pullback(mu2, *f), truncation);
            for (const SymFnTensor& t : kernels) {
                const double lhs = contract_kernel(t, tr.map, mu1.levy_ptr()).norm();
                norm_ineq.take(lhs, t.norm(), lhs - t.norm());
            }
        }
        std::vector<Vector> pts(mu1.levy().atoms().begin(), mu1.levy().atoms().end());
        tilde.take(verify_tilde_intertwine(tr, k, pts));
    }
    add_worst(rows, "diagram_exp_martingale", k_class, tol, "poisson_sum");
    add_worst(rows, "diagram_trigonometric", trig, tol, "poisson_sum");
    add_worst(rows, "contraction_norm_inequality", norm_ineq, p.real("norm_tolerance", 1e-12), "poisson_sum");
    add_worst(rows, "difference_intertwine", tilde, tol, "poisson_sum");
}

OUSystem gaussian_system(const Params& p)
{
    if (p.has("gaussian_system")) {
        const Json& j = p.at("gaussian_system");
        return OUSystem::gaussian(parse_matrix(j.at("drift"), "params.gaussian_system.drift"),
                                  parse_matrix(j.at("diffusion"), "params.gaussian_system.diffusion"));
    }
    Matrix a(2, 2), b(2, 2);
    a << -1.0, 0.5, -0.3, -0.8;
    b << 1.0, 0.2, 0.2, 0.5;
    return OUSystem::gaussian(a, b);
}

OUSystem jump_system(const Params& p)
{
    if (p.has("jump_system")) {
        const Json& j = p.at("jump_system");
        const Matrix a = parse_matrix(j.at("drift"), "params.jump_system.drift");
        return OUSystem::jump(a, parse_levy(j, static_cast<int>(a.rows()), "params.jump_system"),
                              parse_vector(j.at("shift"), "params.jump_system.shift"));
    }
    Matrix a(2, 2);
    a << -1.0, 0.5, -0.3, -0.8;
    Vector y1(2), y2(2), b(2);
    y1 << 0.5, 0.5;
    y2 << 2.0, 0.0;
    b << 0.1, 0.1;
    return OUSystem::jump(a, AtomicLevyMeasure(2, {y1, y2}, {1.0, 0.4}), b);
}

void ou_suite(const Scenario& s, const Params& p, Rows& rows, unsigned workers)
{
    Draw draw(derive_seed(s.seed, 0));
    const int pairs = p.count("pairs", 10);
    const int probes = p.count("probes", 10);
    const auto paths = static_cast<std::size_t>(p.count("samples", 100000));
    const double sigmas = p.real("sigmas", 3.0);
    const double fixed_tol = p.real("fixed_point_tolerance", 1e-7);
    const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
    std::uint64_t stream = 100;
    for (const bool gaussian : {true, false}) {
        const OUSystem sys = gaussian ? gaussian_system(p) : jump_system(p);
        const std::string tag = gaussian ? "gaussian" : "jump";
        const int d = sys.dim();
        Worst semigroup;
        for (int k = 0; k < pairs; ++k) {
            const double a = draw.uniform(0.0, 2.0);
            const double b = draw.uniform(0.0, 2.0);
            semigroup.take(verify_skew_semigroup(sys, a, b, 50, derive_seed(s.seed, stream++)));
        }
        add_worst(rows, tag + "_semigroup", semigroup,
                  gaussian ? p.real("gaussian_tolerance", 1e-9) : p.real("jump_tolerance", 1e-7), "char_fn");

        const OULaw inv = invariant_law(sys);
        if (gaussian) {
            rows.small("lyapunov_residual",
                       lyapunov_residual(sys.drift(), sys.diffusion(), inv.gaussian->covariance()),
                       p.real("lyapunov_tolerance", 1e-10), "kronecker");
            double lam = std::numeric_limits<double>::infinity();
            for (double t : {0.5, 1.0, 2.0})
                lam = std::min(lam, check_self_decomposable(sys.semigroup(t), *inv.gaussian).min_eigenvalue);
            rows.at_least("self_decomposable_min_eigenvalue", lam, -p.real("psd_tolerance", 1e-9), 0.0, "eigen");
        } else {
            Worst sd;
            for (double t : {0.5, 1.0, 2.0})
                sd.take(self_decomposability_residual(sys, inv, t, 20, derive_seed(s.seed, stream++)));
            add_worst(rows, "self_decomposable_char_fn", sd, fixed_tol, "char_fn");
        }

        const TestFunction k = exp_martingale(inv.char_fn, draw.normal_vector(d)).as_function();
        rows.small(tag + "_chapman_kolmogorov",
                   chapman_kolmogorov_residual(sys, draw.uniform(0.1, 1.0), draw.uniform(0.1, 1.0), k, 20,
                                               derive_seed(s.seed, stream++)),
                   fixed_tol, "char_fn");
        rows.small(tag + "_invariant_fixed_point", invariant_fixed_point_residual(sys, inv, 1.0, k), fixed_tol,
                   "char_fn");

        Vector y0(d);
        for (int i = 0; i < d; ++i)
            y0(i) = i % 2 == 0 ? 0.5 : -0.3;
        const SampleBatch ends = simulate_endpoints(sys, y0, grid, paths, derive_seed(s.seed, stream++), workers);
        const OULaw marginal = marginal_law(sys, grid.back());
        const Vector mean = sys.semigroup(grid.back()) * y0;
        Worst band;
        for (int k2 = 0; k2 < probes; ++k2) {
            const Vector x = draw.normal_vector(d);
            const EmpiricalCharFn e = empirical_char_fn(ends, x);
            const Complex expected = std::exp(Complex(0.0, mean.dot(x))) * marginal.char_fn(x);
            const double dev = std::abs(e.value - expected);
            const double bound = sigmas * std::hypot(e.se_real, e.se_imag);
            band.take(dev, bound, dev - bound);
        }
        add_worst(rows, tag + "_path_char_fn", band, 0.0, "monte_carlo");
    }
}

void independence_suite(const Scenario& s, const Params& p, Rows& rows)
{
    Draw draw(derive_seed(s.seed, 0));
    const int max_dim = p.count("max_dim", 3);
    const int max_k = p.count("max_functionals", 8);
    const double scale = p.real("functional_scale", 2.0);
    Worst distinct, duplicate;
    for (int i = 0; i < p.count("sets", 50); ++i) {
        const GaussianLaw law = random_gaussian(draw, draw.integer(1, max_dim), false);
        const CharFn mu = char_fn(law);
        std::vector<Vector> xs;
        const int k = draw.integer(2, max_k);
        for (int j = 0; j < k; ++j)
            xs.push_back(draw.normal_vector(law.dim(), scale));
        const double lam = gram_independence(mu, xs).min_eigenvalue;
        distinct.take(lam, 0.0, -lam);
        xs.push_back(xs[static_cast<std::size_t>(draw.integer(0, k - 1))]);
        duplicate.take(std::abs(gram_independence(mu, xs).min_eigenvalue));
    }
    const double floor = p.real("tolerance", 1e-10);
    rows.at_least("distinct_min_eigenvalue", distinct.any ? -distinct.residual : 0.0, floor, 0.0, "eigen");
    add_worst(rows, "duplicate_min_eigenvalue", duplicate, p.real("duplicate_tolerance", 1e-12), "eigen");
}

void dispatch(const Scenario& s, Rows& rows, unsigned workers)
{
    const Params p(s.params);
    if (s.kind == "skew_factor")
        skew_factor_suite(s, p, rows);
    else if (s.kind == "rkhs_restriction")
        rkhs_suite(s, p, rows);
    else if (s.kind == "mehler_contraction")
        contraction_suite(s, p, rows, workers);
    else if (s.kind == "mehler_identity")
        identity_suite(s, p, rows);
    else if (s.kind == "chaos_isometry")
        chaos_isometry_suite(s, p, rows);
    else if (s.kind == "stroock")
        stroock_suite(s, p, rows);
    else if (s.kind == "gaussian_diagram")
        gaussian_diagram_suite(s, p, rows);
    else if (s.kind == "poisson_chaos")
        poisson_chaos_suite(s, p, rows);
    else if (s.kind == "poisson_diagram")
        poisson_diagram_suite(s, p, rows);
    else if (s.kind == "ou_semigroup")
        ou_suite(s, p, rows, workers);
    else if (s.kind == "independence")
        independence_suite(s, p, rows);
    else
        throw ValidationError("unknown scenario kind \"" + s.kind + "\"");
}

Json gaussian_json(const Matrix& q)
{
    return Json{{"type", "gaussian"}, {"covariance", matrix_to_json(q)}};
}

BuiltinScenario entry(std::string id, std::string kind, Json params, std::string description)
{
    Scenario s;
    s.id = std::move(id);
    s.kind = std::move(kind);
    s.seed = 20240101;
    s.params = std::move(params);
    return {std::move(s), std::move(description)};
}

} // namespace

Scenario apply_overrides(Scenario s, const Overrides& o)
{
    if (o.seed)
        s.seed = *o.seed;
    if (o.samples)
        s.params["samples"] = *o.samples;
    if (o.truncation)
        s.params["truncation"] = *o.truncation;
    return s;
}

Report run_scenario(const Scenario& s, unsigned workers)
{
    validate(s);
    Report report;
    report.id = s.id;
    report.kind = s.kind;
    report.seed = s.seed;
    report.hash = git_blob_hash(canonical_text(s));
    Rows rows(report, s.seed);
    try {
        dispatch(s, rows, std::max(1u, workers));
    } catch (const Error& e) {
        report.error = ReportError{e.name(), e.what()};
    } catch (const Json::exception& e) {
        report.error = ReportError{"ParseError", e.what()};
    } catch (const std::exception& e) {
        report.error = ReportError{"InternalError", e.what()};
    }
    return report;
}

std::vector<Report> run_batch(const std::vector<Scenario>& scenarios, unsigned jobs)
{
    for (const Scenario& s : scenarios)
        validate(s);
    std::vector<Report> reports(scenarios.size());
    const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(scenarios.size())));
    const unsigned workers = std::max(1u, std::max(1u, jobs) / threads);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++)
            reports[i] = run_scenario(scenarios[i], workers);
    };
    if (threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }
    std::stable_sort(reports.begin(), reports.end(), [](const Report& a, const Report& b) { return a.id < b.id; });
    return reports;
}

const std::vector<BuiltinScenario>& builtin_catalogue()
{
    static const std::vector<BuiltinScenario> catalogue = [] {
        Matrix diag = Matrix::Zero(2, 2);
        diag(0, 0) = 0.6;
        diag(1, 1) = 0.8;
        const Json identity2 = gaussian_json(Matrix::Identity(2, 2));
        std::vector<BuiltinScenario> c{
            entry("skew-factor", "skew_factor",
                  Json{{"valid", 50}, {"invalid", 50}, {"max_dim", 6}, {"probes", 100}, {"tolerance", 1e-10}},
                  "random Gaussian triples: factor identity and rejection of non-skew maps"),
            entry("rkhs-restriction", "rkhs_restriction",
                  Json{{"count", 50}, {"max_dim", 6}, {"tolerance", 1e-9}, {"round_trip_tolerance", 1e-10}},
                  "restriction to the RKHS is a contraction and round-trips through extension"),
            entry("mehler-contraction", "mehler_contraction",
                  Json{{"gaussian_triples", 10}, {"jump_triples", 10}, {"functions", 10}, {"samples", 100000},
                       {"exact_tolerance", 1e-10}},
                  "P_T is an L2 contraction (Monte Carlo and exact)"),
            entry("mehler-identity", "mehler_identity",
                  Json{{"gaussian_triples", 5}, {"jump_triples", 5}, {"functionals", 10}, {"probes", 50},
                       {"gaussian_tolerance", 1e-9}, {"jump_tolerance", 1e-8}},
                  "P_T maps exponential martingales to exponential martingales"),
            entry("gauss-chaos-isometry", "chaos_isometry",
                  Json{{"max_degree", 4}, {"max_dim", 3}, {"tolerance", 1e-9}},
                  "Gaussian multiple integrals: isometry and orthogonality"),
            entry("stroock", "stroock",
                  Json{{"polynomials", 20}, {"max_degree", 4}, {"truncation", 4}, {"exact_tolerance", 1e-10},
                       {"h_norm", 0.5}, {"exp_truncation", 8}, {"exp_tolerance", 1e-4}},
                  "chaos reconstruction from expected Malliavin derivatives"),
            entry("gauss-diag-2d", "gaussian_diagram",
                  Json{{"map", matrix_to_json(diag)}, {"source", identity2}, {"target", identity2},
                       {"random_triples", 10}, {"truncation", 8}, {"probes", 10},
                       {"coefficient_tolerance", 1e-8}, {"reconstruction_tolerance", 1e-4}},
                  "Gaussian commuting diagram on diag(0.6, 0.8) and random triples"),
            entry("poisson-chaos", "poisson_chaos",
                  Json{{"cases", 6}, {"max_atoms", 3}, {"max_degree", 3}, {"tolerance", 1e-9}},
                  "Poisson multiple integrals, Last-Penrose expansion, product formula"),
            entry("poisson-diagram", "poisson_diagram",
                  Json{{"triples", 10}, {"truncation", 3}, {"tolerance", 1e-8}, {"norm_tolerance", 1e-12}},
                  "Poisson commuting diagram on random jump triples"),
            entry("ou-semigroup", "ou_semigroup",
                  Json{{"pairs", 10}, {"probes", 10}, {"samples", 100000}, {"gaussian_tolerance", 1e-9},
                       {"jump_tolerance", 1e-7}, {"psd_tolerance", 1e-9}},
                  "Ornstein-Uhlenbeck skew semigroups, invariant laws, path simulation"),
            entry("independence", "independence",
                  Json{{"sets", 50}, {"max_functionals", 8}, {"max_dim", 3}, {"tolerance", 1e-10},
                       {"duplicate_tolerance", 1e-12}},
                  "linear independence of exponential functions via Gram matrices"),
        };
        std::sort(c.begin(), c.end(),
                  [](const BuiltinScenario& a, const BuiltinScenario& b) { return a.scenario.id < b.scenario.id; });
        return c;
    }();
    return catalogue;
}

Scenario builtin_scenario(const std::string& id)
{
    for (const auto& b : builtin_catalogue())
        if (b.scenario.id == id)
            return b.scenario;
    throw ValidationError("unknown builtin scenario \"" + id + "\"");
}

std::string catalogue_listing()
{
    std::string out;
    for (const auto& b : builtin_catalogue())
        out += b.scenario.id + '\t' + b.scenario.kind + '\t' + b.description + '\n';
    return out;
}

} // namespace skewq
