#include "collarspec/cusp_analysis.hpp"

#include "collarspec/errors.hpp"
#include "collarspec/ode.hpp"
#include "collarspec/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace collarspec {

std::string to_string(Side side) { return side == Side::plus ? "plus" : "minus"; }

Side side_from_string(const std::string& name) {
    if (name == "plus") return Side::plus;
    if (name == "minus") return Side::minus;
    throw validation_error("unknown cusp side '" + name + "'");
}

void CuspProblem::validate() const {
    config.validate();
    if (!(mu > 0.0))
        throw validation_error(
            "cusp channels need mu > 0 (the constant mode has no L2 "
            "eigenvalues below the band)");
    if (!(t_cut > 0.0) || !(t_cut < outer()))
        throw validation_error("need 0 < t_cut < |outer endpoint|");
}

double CuspProblem::outer() const {
    return side == Side::plus ? config.t_max : -config.t_min;
}

namespace {

// Work on the plus side throughout: the minus side is the plus side of the
// mirrored profile.
CollarConfig oriented_config(const CuspProblem& problem) {
    CollarConfig cfg = problem.config;
    if (problem.side == Side::minus) {
        cfg.profile = mirror_profile(problem.config.profile);
        const double tmin = cfg.t_min, tmax = cfg.t_max;
        cfg.t_min = -tmax;
        cfg.t_max = -tmin;
    }
    return cfg;
}

} // namespace

SLProblem cusp_channel_problem(const CuspProblem& problem, const SolveOptions&) {
    problem.validate();
    CollarConfig cfg = oriented_config(problem);
    TransformData td(cfg, 0.0, problem.t_cut, problem.outer());
    return td.schroedinger_problem(problem.mu, problem.cut_bc, problem.outer_bc);
}

TruncationTable cusp_eigenvalues(const CuspProblem& problem, double lambda_max,
                                 const std::vector<double>& t_cut_sequence,
                                 double decrease_factor, const SolveOptions& opt) {
    if (t_cut_sequence.size() < 3)
        throw validation_error("truncation sequence needs at least 3 cuts");
    for (std::size_t i = 0; i + 1 < t_cut_sequence.size(); ++i)
        if (!(t_cut_sequence[i] > t_cut_sequence[i + 1]))
            throw validation_error("truncation sequence must decrease");

    TruncationTable table;
    table.t_cuts = t_cut_sequence;
    table.eigen.resize(t_cut_sequence.size());
    par::for_index(
        t_cut_sequence.size(),
        [&](std::size_t i) {
            CuspProblem p = problem;
            p.t_cut = t_cut_sequence[i];
            SLProblem prob = cusp_channel_problem(p, opt);
            const int count = count_eigenvalues(prob, lambda_max, opt.prufer);
            std::vector<double> vals;
            for (int k = 1; k <= count; ++k)
                vals.push_back(kth_eigenvalue(prob, k, opt.bisect_tol, opt.prufer));
            table.eigen[i] = std::move(vals);
        },
        opt.policy);

    // indices present at every cut are extrapolated from the last three cuts
    std::size_t common = std::numeric_limits<std::size_t>::max();
    for (const auto& v : table.eigen) common = std::min(common, v.size());
    const std::size_t m = t_cut_sequence.size();
    for (std::size_t j = 0; j < common; ++j) {
        const double l0 = table.eigen[m - 3][j];
        const double l1 = table.eigen[m - 2][j];
        const double l2 = table.eigen[m - 1][j];
        const double d1 = l1 - l0;
        const double d2 = l2 - l1;
        const bool ok = std::abs(d2) <= decrease_factor * std::abs(d1) ||
                        std::abs(d2) < 1e-10 * (1.0 + std::abs(l2));
        double extrap = l2;
        const double denom = d2 - d1;
        if (std::abs(denom) > 1e-14 * (std::abs(d1) + std::abs(d2)))
            extrap = l2 - d2 * d2 / denom; // Aitken Δ²
        table.extrapolated.push_back(extrap);
        table.index_converged.push_back(ok);
        table.converged = table.converged && ok;
    }
    return table;
}

CuspEigenfunction cusp_eigenfunction(const CuspProblem& problem, double lambda,
                                     int n_samples, const SolveOptions& opt) {
    if (n_samples < 64 || n_samples % 2 == 0)
        throw validation_error("cusp eigenfunction: need an odd grid of >= 65 points");
    problem.validate();
    CollarConfig cfg = oriented_config(problem);
    TransformData td(cfg, 0.0, problem.t_cut, problem.outer());
    SLProblem prob = td.schroedinger_problem(problem.mu, problem.cut_bc,
                                             problem.outer_bc);

    // forward (θ, log r) pass from the cusp tip: forward integration tracks
    // the solution growing through the potential wall, which is the
    // eigenfunction direction, so the shape near the tip is well conditioned
    auto rhs = [&](double s, const std::array<double, 2>& y,
                   std::array<double, 2>& dy) {
        const double c = std::cos(y[0]);
        const double sn = std::sin(y[0]);
        const double g = lambda - prob.q(s);
        dy[0] = c * c + g * sn * sn;
        dy[1] = sn * c * (1.0 - g);
    };
    OdeOptions oo;
    oo.rel_tol = opt.prufer.rel_tol;
    oo.abs_tol = opt.prufer.abs_tol;

    CuspEigenfunction fn;
    fn.lambda = lambda;
    fn.mu = problem.mu;
    fn.side = problem.side;
    fn.t_cut = problem.t_cut;
    fn.a = cfg.a;
    fn.b = cfg.b;
    fn.d = cfg.d;

    const double slo = prob.t0, shi = prob.t1;
    const int n = n_samples;
    fn.s.resize(n);
    std::vector<double> theta(n), logr(n);
    std::array<double, 2> y{
        problem.cut_bc == BoundaryCondition::dirichlet ? 0.0 : M_PI / 2.0, 0.0};
    double cursor = slo;
    for (int i = 0; i < n; ++i) {
        const double s = slo + (shi - slo) * i / (n - 1);
        y = integrate_ode<2>(rhs, y, cursor, s, oo);
        cursor = s;
        fn.s[i] = s;
        theta[i] = y[0];
        logr[i] = y[1];
    }

    // w-weighted norm of u equals the L²(ds) norm of g (unitarity);
    // normalize with the overall scale kept in log form
    double logmax = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) logmax = std::max(logmax, logr[i]);
    const double hs = (shi - slo) / (n - 1);
    double nrm2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double gi = std::exp(logr[i] - logmax) * std::sin(theta[i]);
        const double wgt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        nrm2 += wgt * gi * gi * hs;
    }
    const double lognrm = logmax + 0.5 * std::log(nrm2);

    // map back to t: u = ρ^{−bd/2}·g(α(t)); with m = −bd/2 and ds/dt = ρ^a,
    //   u′ = m·ρ^{m−1}ρ′·g + ρ^{m+a}·g′,   g = r sinθ, g′ = r cosθ
    const double bd = cfg.b * cfg.d;
    const double a = cfg.a;
    fn.t.resize(n);
    fn.u.resize(n);
    fn.du.resize(n);
    fn.log_g2.resize(n);
    fn.log_u2.resize(n);
    fn.log_rho.resize(n);
    fn.potential.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = td.map().t_of_s(fn.s[i]);
        const double rho = cfg.profile.value(0.0, t);
        const double rho_t = cfg.profile.d_t(0.0, t);
        const double lg = logr[i] - lognrm;
        const double sn = std::sin(theta[i]);
        const double cs = std::cos(theta[i]);
        const double lrho = std::log(rho);
        fn.t[i] = t;
        fn.log_rho[i] = lrho;
        fn.potential[i] = conjugated_potential_at_t(cfg, 0.0, t);
        fn.log_g2[i] = 2.0 * (lg + std::log(std::abs(sn) + 1e-300));
        fn.log_u2[i] = fn.log_g2[i] - bd * lrho;
        const double amp = std::exp(lg - 0.5 * bd * lrho);
        fn.u[i] = amp * sn;
        fn.du[i] = amp * (-0.5 * bd * (rho_t / rho) * sn + std::pow(rho, a) * cs);
    }
    return fn;
}

bool DecayReport::pass() const {
    if (!convexity_pass || !surrogate_pass) return false;
    for (const auto& v : per_j)
        if (!v.pass) return false;
    return true;
}

DecayReport decay_check(const CuspEigenfunction& fn,
                        const std::vector<double>& j_list) {
    const std::size_t n = fn.s.size();
    if (n < 64) throw validation_error("decay_check: grid too coarse near t_cut");
    DecayReport rep;

    // inner 20% of the t-range, nearest the cusp tip
    const double t_lo = fn.t.front();
    const double t_hi = fn.t.back();
    const double t_win = t_lo + 0.2 * (t_hi - t_lo);
    std::size_t i_win = 0;
    while (i_win + 1 < n && fn.t[i_win + 1] <= t_win) ++i_win;
    i_win = std::max<std::size_t>(i_win, 8);

    for (double j : j_list) {
        DecayVerdict v;
        v.j = j;
        // log(t^{−j}·u²) = log u² − j·log|t| must increase away from the tip
        auto val = [&](std::size_t i) {
            return fn.log_u2[i] - j * std::log(std::abs(fn.t[i]));
        };
        bool monotone = true;
        for (std::size_t i = 0; i < i_win; ++i)
            if (!(val(i) <= val(i + 1) + 1e-9)) {
                monotone = false;
                break;
            }
        v.monotone = monotone;
        v.drop_log = val(i_win) - val(0);
        v.pass = monotone && v.drop_log > 0.0;
        rep.per_j.push_back(v);
    }

    // f = U^{−1}(u²) = ρ^{bd/2}·u² ∘ t(s) = ρ^{−bd/2}·g², i.e.
    // log f = (log g² + log u²)/2.  Scale by the max before exponentiating.
    std::vector<double> logf(n), f(n);
    double logf_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        logf[i] = 0.5 * (fn.log_g2[i] + fn.log_u2[i]);
        logf_max = std::max(logf_max, logf[i]);
    }
    for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(logf[i] - logf_max);

    const double hs = fn.s[1] - fn.s[0];
    const double eps_fp = std::numeric_limits<double>::epsilon();
    int cviol = 0, sviol = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double second = f[i + 1] - 2.0 * f[i] + f[i - 1];
        const double local = std::abs(f[i - 1]) + std::abs(f[i]) + std::abs(f[i + 1]);

        // convexity of f holds toward the tip, where the fiber term
        // dominates: f″ ≥ (V + 2(μρ^{−2b} − λ))·f ≥ 0 once the bracket is
        // nonnegative.  The second difference is h²f″ + O(h⁴f⁗), f⁗ ~ K²f.
        const double mu_wall = fn.mu * std::exp(-2.0 * fn.b * fn.log_rho[i]);
        const double K = std::abs(fn.potential[i]) + mu_wall + std::abs(fn.lambda);
        if (fn.potential[i] + 2.0 * (mu_wall - fn.lambda) >= 0.0) {
            const double slack2 =
                hs * hs * hs * hs * K * K * f[i] + 16.0 * eps_fp * local + 1e-14;
            if (second < -slack2) ++cviol;
        }

        // pointwise surrogate in the scaled variables:
        //   f″ − V·f ≥ 2(μρ^{−2b} − λ)·f
        const double fpp = second / (hs * hs);
        const double lhs = fpp - fn.potential[i] * f[i];
        const double rhs = 2.0 * (mu_wall - fn.lambda) * f[i];
        const double slack = K * K * hs * hs * f[i] + 16.0 * eps_fp * local / (hs * hs) +
                             1e-12 * (1.0 + std::abs(rhs));
        if (lhs < rhs - slack) ++sviol;
    }
    rep.convexity_violations = cviol;
    rep.convexity_pass = cviol == 0;
    rep.surrogate_violations = sviol;
    rep.surrogate_pass = sviol == 0;
    return rep;
}

double gradient_energy(const CuspEigenfunction& fn) {
    // ∫ (u′)²·ρ^{−2a}·ρ^{a+bd} dt = ∫ (u′)²·ρ^{−2a+bd} ds  (dt = ρ^{−a} ds)
    const std::size_t n = fn.s.size();
    const double hs = fn.s[1] - fn.s[0];
    const double expo = -2.0 * fn.a + fn.b * fn.d;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double integrand =
            fn.du[i] * fn.du[i] * std::exp(expo * fn.log_rho[i]);
        const double wgt =
            (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += wgt * integrand;
    }
    return acc * hs / 3.0;
}

GradientTable gradient_integrability(const CuspProblem& problem, int index,
                                     const std::vector<double>& t_cut_sequence,
                                     double stabilize_tol,
                                     const SolveOptions& opt) {
    if (index < 1) throw validation_error("gradient_integrability: index >= 1");
    GradientTable table;
    table.t_cuts = t_cut_sequence;
    table.values.resize(t_cut_sequence.size());
    par::for_index(
        t_cut_sequence.size(),
        [&](std::size_t i) {
            CuspProblem p = problem;
            p.t_cut = t_cut_sequence[i];
            SLProblem prob = cusp_channel_problem(p, opt);
            const double lambda =
                kth_eigenvalue(prob, index, opt.bisect_tol, opt.prufer);
            auto fn = cusp_eigenfunction(p, lambda, 4001, opt);
            table.values[i] = gradient_energy(fn);
        },
        opt.policy);
    table.rel_change.assign(t_cut_sequence.size(), 0.0);
    for (std::size_t i = 1; i < table.values.size(); ++i)
        table.rel_change[i] = std::abs(table.values[i] - table.values[i - 1]) /
                              std::max(std::abs(table.values[i]), 1e-300);
    table.stabilized = !table.values.empty() &&
                       table.rel_change.back() < stabilize_tol;
    // divergence flag: values growing without the changes shrinking
    if (table.values.size() >= 3) {
        const auto& v = table.values;
        const std::size_t m = v.size();
        if (v[m - 1] > v[m - 2] && v[m - 2] > v[m - 3] &&
            (v[m - 1] - v[m - 2]) > (v[m - 2] - v[m - 3]) && !table.stabilized)
            throw solver_error("gradient_integrability: divergent tail");
    }
    return table;
}

} // namespace collarspec
