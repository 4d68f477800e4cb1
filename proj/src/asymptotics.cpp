#include "collarspec/asymptotics.hpp"

#include "collarspec/errors.hpp"
#include "collarspec/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace collarspec {

double predicted_slope(const CollarConfig& config, double lambda_max) {
    if (config.a != -1.0)
        throw validation_error("counting law requires a = -1");
    if (!(lambda_max > 0.0)) throw validation_error("Lambda must be positive");
    const auto c = homogeneity_constants(config.profile);
    const double bd = config.b * config.d;
    auto side = [&](double cc) {
        const double gap = lambda_max - 0.25 * cc * cc * bd * bd;
        return gap > 0.0 ? cc * std::sqrt(gap) : 0.0;
    };
    return (side(c.c_plus) + side(c.c_minus)) / M_PI;
}

double predicted_count(const CollarConfig& config, double lambda_max, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw validation_error("predicted_count needs 0 < eps < 1");
    return predicted_slope(config, lambda_max) * std::log(1.0 / eps);
}

LineFit slope_fit(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 4 || y.size() != n)
        throw validation_error("slope_fit needs at least 4 points");
    double xm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xm += x[i];
        ym += y[i];
    }
    xm /= n;
    ym /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
    }
    if (!(sxx > 0.0)) throw validation_error("slope_fit: degenerate grid");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ym - fit.slope * xm;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += r * r;
    }
    fit.slope_stderr = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
    return fit;
}

CountReport count_sweep(const CollarConfig& config, double lambda_max,
                        const std::vector<double>& eps_grid,
                        const SolveOptions& opt) {
    if (eps_grid.size() < 4)
        throw validation_error("count sweep needs at least 4 eps points");
    for (std::size_t i = 0; i + 1 < eps_grid.size(); ++i)
        if (!(eps_grid[i] > eps_grid[i + 1]))
            throw validation_error("eps grid must decrease strictly");

    CountReport rep;
    rep.lambda_max = lambda_max;
    rep.eps = eps_grid;
    rep.predicted_slope = predicted_slope(config, lambda_max);
    const std::size_t n = eps_grid.size();
    rep.ln_inv_eps.resize(n);
    rep.dirichlet.resize(n);
    rep.neumann.resize(n);
    rep.predicted.resize(n);
    rep.channels_dirichlet.resize(n);

    SolveOptions inner = opt;
    inner.policy = par::Policy::serial; // parallelism lives on the ε loop
    par::for_index(
        n,
        [&](std::size_t i) {
            const double eps = eps_grid[i];
            rep.ln_inv_eps[i] = std::log(1.0 / eps);
            rep.predicted[i] = predicted_count(config, lambda_max, eps);
            auto cd = collar_counts(config, eps, lambda_max,
                                    BoundaryCondition::dirichlet, inner);
            auto cn = collar_counts(config, eps, lambda_max,
                                    BoundaryCondition::neumann, inner);
            rep.dirichlet[i] = total_count(cd);
            rep.neumann[i] = total_count(cn);
            rep.channels_dirichlet[i] = static_cast<int>(cd.size());
        },
        opt.policy);

    std::vector<double> yd(rep.dirichlet.begin(), rep.dirichlet.end());
    std::vector<double> yn(rep.neumann.begin(), rep.neumann.end());
    rep.dirichlet_fit = slope_fit(rep.ln_inv_eps, yd);
    rep.neumann_fit = slope_fit(rep.ln_inv_eps, yn);
    rep.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        rep.residuals[i] = yd[i] - (rep.dirichlet_fit.intercept +
                                    rep.dirichlet_fit.slope * rep.ln_inv_eps[i]);
    return rep;
}

std::vector<ZeroCountRow> classical_count_check(DecayingPotential kind,
                                                double amplitude, double M,
                                                const std::vector<double>& a_grid,
                                                const SolveOptions& opt) {
    if (!(M > 0.0)) throw validation_error("zero-count law needs M > 0");
    if (!std::isfinite(amplitude))
        throw validation_error("potential amplitude must be finite");
    for (std::size_t i = 0; i + 1 < a_grid.size(); ++i)
        if (!(a_grid[i] < a_grid[i + 1]))
            throw validation_error("a grid must increase strictly");

    std::function<double(double)> r;
    switch (kind) {
        case DecayingPotential::lorentzian:
            r = [amplitude](double s) { return amplitude / (1.0 + s * s); };
            break;
        case DecayingPotential::exponential:
            r = [amplitude](double s) { return amplitude * std::exp(-s); };
            break;
        default:
            throw validation_error("potential kind is not integrable");
    }

    std::vector<ZeroCountRow> rows(a_grid.size());
    par::for_index(
        a_grid.size(),
        [&](std::size_t i) {
            const double a = a_grid[i];
            SLProblem prob;
            prob.t0 = 0.0;
            prob.t1 = a;
            prob.p = [](double) { return 1.0; };
            prob.w = [](double) { return 1.0; };
            prob.q = r;
            auto count_in_band = [&](BoundaryCondition bc) {
                prob.bc_left = prob.bc_right = bc;
                const int below_zero =
                    count_eigenvalues(prob, -1e-9 * (1.0 + M), opt.prufer);
                return count_eigenvalues(prob, M, opt.prufer) - below_zero;
            };
            ZeroCountRow row;
            row.a = a;
            row.dirichlet = count_in_band(BoundaryCondition::dirichlet);
            row.neumann = count_in_band(BoundaryCondition::neumann);
            row.predicted = a * std::sqrt(M) / M_PI;
            row.deviation_dirichlet = row.dirichlet - row.predicted;
            row.deviation_neumann = row.neumann - row.predicted;
            rows[i] = row;
        },
        opt.policy);
    return rows;
}

} // namespace collarspec
