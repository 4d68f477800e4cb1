#include "collarspec/liouville_transform.hpp"

#include "collarspec/errors.hpp"
#include "collarspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace collarspec {

namespace {

void check_no_singularity(double eps, double x, double y) {
    if (eps == 0.0 && std::min(x, y) <= 0.0 && 0.0 <= std::max(x, y))
        throw validation_error(
            "alpha: eps = 0 with the singular point 0 inside the range");
}

} // namespace

double alpha_integral(const CollarConfig& config, double eps, double t,
                      double t0, const QuadOptions& quad) {
    if (eps < 0.0) throw validation_error("alpha: eps must be nonnegative");
    if (t == t0) return 0.0;
    check_no_singularity(eps, t, t0);
    auto rho = config.profile.value;
    const double a = config.a;
    return integrate([rho, eps, a](double u) { return std::pow(rho(eps, u), a); },
                     t0, t, quad);
}

double default_alpha_base(double eps, double t_lo, double t_hi) {
    if (eps > 0.0) return 0.0;
    return std::abs(t_lo) < std::abs(t_hi) ? t_lo : t_hi;
}

AlphaMap::AlphaMap(const CollarConfig& config, double eps, double t_lo,
                   double t_hi, double t0, const QuadOptions& quad)
    : t0_(t0), quad_(quad) {
    if (!(t_lo < t_hi)) throw validation_error("AlphaMap: empty interval");
    if (t0 < t_lo || t0 > t_hi)
        throw validation_error("AlphaMap: base point outside the interval");
    check_no_singularity(eps, t_lo, t_hi);
    auto rho = config.profile.value;
    const double a = config.a;
    density_ = [rho, eps, a](double u) { return std::pow(rho(eps, u), a); };

    // march knots so each panel carries a bounded s-increment
    const double max_ds = 0.25;
    std::vector<double> knots{t_lo};
    double cursor = t_lo;
    double step = t_hi - t_lo;
    while (cursor < t_hi) {
        step = std::min(step * 4.0, t_hi - cursor);
        double ds;
        for (;;) {
            ds = integrate(density_, cursor, cursor + step, quad_);
            if (std::abs(ds) <= max_ds || step < 1e-13 * (std::abs(cursor) + 1.0))
                break;
            step *= 0.5 * std::max(0.1, std::min(1.0, max_ds / std::abs(ds)));
        }
        cursor += step;
        if (t_hi - cursor < 1e-15 * (std::abs(t_hi) + 1.0)) cursor = t_hi;
        knots.push_back(cursor);
        if (knots.size() > 500000)
            throw solver_error("AlphaMap: transform interval too long in s");
    }
    t_knots_ = std::move(knots);
    s_knots_.assign(t_knots_.size(), 0.0);
    for (std::size_t i = 1; i < t_knots_.size(); ++i)
        s_knots_[i] = s_knots_[i - 1] +
                      integrate(density_, t_knots_[i - 1], t_knots_[i], quad_);
    // shift so that s(t0) = 0
    const double s0 = s_of_t(t0);
    for (double& s : s_knots_) s -= s0;
}

double AlphaMap::s_of_t(double t) const {
    if (t < t_knots_.front() - 1e-12 || t > t_knots_.back() + 1e-12)
        throw validation_error("AlphaMap: t outside the mapped interval");
    t = std::clamp(t, t_knots_.front(), t_knots_.back());
    auto it = std::upper_bound(t_knots_.begin(), t_knots_.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - t_knots_.begin());
    hi = std::clamp<std::size_t>(hi, 1, t_knots_.size() - 1);
    const std::size_t lo = hi - 1;
    // integrate from the nearer knot
    if (t - t_knots_[lo] <= t_knots_[hi] - t)
        return s_knots_[lo] + integrate(density_, t_knots_[lo], t, quad_);
    return s_knots_[hi] - integrate(density_, t, t_knots_[hi], quad_);
}

double AlphaMap::t_of_s(double s) const {
    const double slo = s_knots_.front(), shi = s_knots_.back();
    if (s < slo - 1e-9 || s > shi + 1e-9)
        throw validation_error("AlphaMap: s outside the range of alpha");
    s = std::clamp(s, slo, shi);
    auto it = std::upper_bound(s_knots_.begin(), s_knots_.end(), s);
    std::size_t hi = static_cast<std::size_t>(it - s_knots_.begin());
    hi = std::clamp<std::size_t>(hi, 1, s_knots_.size() - 1);
    const std::size_t lo = hi - 1;

    double tl = t_knots_[lo], th = t_knots_[hi];
    // linear seed, then Newton with bisection fallback on the bracket
    double t = tl + (th - tl) * (s - s_knots_[lo]) /
                        std::max(s_knots_[hi] - s_knots_[lo], 1e-300);
    double ft = s_of_t(t) - s;
    for (int iter = 0; iter < 60; ++iter) {
        if (std::abs(ft) < 1e-14 * (1.0 + std::abs(s))) break;
        if (ft > 0.0)
            th = t;
        else
            tl = t;
        const double dt = ft / density_(t); // α strictly increasing
        double next = t - dt;
        if (!(next > tl) || !(next < th)) next = 0.5 * (tl + th);
        if (std::abs(next - t) < 1e-12 * (1.0 + std::abs(t))) {
            t = next;
            break;
        }
        t = next;
        ft = s_of_t(t) - s;
    }
    return t;
}

double conjugated_potential_at_t(const CollarConfig& config, double eps, double t) {
    const double bd = config.b * config.d;
    const double a = config.a;
    const double rho = config.profile.value(eps, t);
    const double rho_t = config.profile.d_t(eps, t);
    const double rho_tt = config.profile.d_tt(eps, t);
    return 0.5 * bd * std::pow(rho, -2.0 * a - 2.0) *
           (rho * rho_tt + 0.5 * (bd - 2.0 * a - 2.0) * rho_t * rho_t);
}

TransformData::TransformData(const CollarConfig& config, double eps, double t_lo,
                             double t_hi, const QuadOptions& quad)
    : config_(config), eps_(eps),
      map_(config, eps, t_lo, t_hi, default_alpha_base(eps, t_lo, t_hi), quad) {}

double TransformData::potential(double s) const {
    return conjugated_potential_at_t(config_, eps_, map_.t_of_s(s));
}

SLProblem TransformData::schroedinger_problem(double mu, BoundaryCondition bc_left,
                                              BoundaryCondition bc_right,
                                              int n_cache) const {
    if (n_cache < 16) throw validation_error("schroedinger_problem: n_cache too small");
    const double slo = map_.s_lo(), shi = map_.s_hi();
    std::vector<double> sg(n_cache), qg(n_cache);
    const double tbe = -2.0 * config_.b; // ρ^{−2b} fiber factor
    for (int i = 0; i < n_cache; ++i) {
        const double s = slo + (shi - slo) * i / (n_cache - 1);
        const double t = map_.t_of_s(s);
        sg[i] = s;
        qg[i] = conjugated_potential_at_t(config_, eps_, t) +
                mu * std::pow(config_.profile.value(eps_, t), tbe);
    }
    auto spline = std::make_shared<CubicSpline>(std::move(sg), std::move(qg));
    SLProblem prob;
    prob.t0 = slo;
    prob.t1 = shi;
    prob.p = [](double) { return 1.0; };
    prob.w = [](double) { return 1.0; };
    prob.q = [spline](double s) { return (*spline)(s); };
    prob.bc_left = bc_left;
    prob.bc_right = bc_right;
    return prob;
}

TransformData::PushedSamples
TransformData::unitary_push(const std::vector<double>& s_grid,
                            const std::vector<double>& f_samples) const {
    if (s_grid.size() != f_samples.size())
        throw validation_error("unitary_push: grid/sample size mismatch");
    PushedSamples out;
    out.t.reserve(s_grid.size());
    out.values.reserve(s_grid.size());
    const double e = -0.5 * config_.b * config_.d;
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        const double t = map_.t_of_s(s_grid[i]);
        out.t.push_back(t);
        out.values.push_back(std::pow(config_.profile.value(eps_, t), e) *
                             f_samples[i]);
    }
    return out;
}

} // namespace collarspec
