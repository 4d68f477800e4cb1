#include "collarspec/continuity_tracker.hpp"

#include "collarspec/errors.hpp"
#include "collarspec/liouville_transform.hpp"
#include "collarspec/parallel.hpp"
#include "collarspec/spline.hpp"
#include "collarspec/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace collarspec {

namespace {

// First `count` entries of the merged Δ⊥ ladder at one ε, multiplicities
// expanded; Λ grows until the ladder is long enough.
std::vector<double> perp_ladder_at(const CollarConfig& config, double eps,
                                   int count, const BranchOptions& opt) {
    const double rho_max = max_profile_on_interval(config.profile, eps,
                                                   config.t_min, config.t_max);
    double lambda_max =
        config.fiber.mu1() * std::pow(rho_max, -2.0 * config.b) + 10.0;
    SolveOptions solve = opt.solve;
    solve.max_per_channel = count; // the ladder needs only a prefix per channel
    for (int grow = 0; grow < 24; ++grow) {
        auto spec = perp_spectrum(config, eps, lambda_max, opt.bc, solve);
        if (spec.total_count() >= count) {
            std::vector<double> ladder;
            for (const auto& e : spec.merged)
                for (int c = 0; c < e.multiplicity &&
                                static_cast<int>(ladder.size()) < count;
                     ++c)
                    ladder.push_back(e.lambda);
            return ladder;
        }
        lambda_max *= 2.0;
    }
    throw solver_error("perp ladder: index not reached below the growth cap");
}

struct LimitEntry {
    double lambda;
    int multiplicity;
};

std::vector<LimitEntry> perp_limit_ladder(const CollarConfig& config,
                                          double lambda_max,
                                          const BranchOptions& opt) {
    std::vector<LimitEntry> ladder;
    const double smallest_cut = opt.limit_t_cuts.back();
    for (Side side : {Side::minus, Side::plus}) {
        const double outer = side == Side::plus ? config.t_max : -config.t_min;
        ProfileRho oriented = side == Side::plus
                                  ? config.profile
                                  : mirror_profile(config.profile);
        const double rho_max =
            max_profile_on_interval(oriented, 0.0, smallest_cut, outer);
        const double mu_cutoff = lambda_max * std::pow(rho_max, 2.0 * config.b);
        auto modes = config.fiber.modes_up_to(mu_cutoff);
        for (std::size_t k = 1; k < modes.size(); ++k) {
            CuspProblem prob;
            prob.config = config;
            prob.side = side;
            prob.mu = modes[k].mu;
            prob.t_cut = opt.limit_t_cuts.front();
            prob.outer_bc = opt.bc;
            auto table = cusp_eigenvalues(prob, lambda_max, opt.limit_t_cuts,
                                          0.9, opt.solve);
            for (double v : table.extrapolated)
                if (v <= lambda_max) ladder.push_back({v, modes[k].multiplicity});
        }
    }
    std::sort(ladder.begin(), ladder.end(),
              [](const LimitEntry& x, const LimitEntry& y) {
                  return x.lambda < y.lambda;
              });
    return ladder;
}

// Per-ε ladders of length `count`, solved concurrently over the grid.
std::vector<std::vector<double>> sweep_ladders(const CollarConfig& config,
                                               const std::vector<double>& eps_grid,
                                               int count,
                                               const BranchOptions& opt,
                                               std::vector<bool>& crossing) {
    std::vector<std::vector<double>> ladders(eps_grid.size());
    crossing.assign(eps_grid.size(), false);
    par::for_index(
        eps_grid.size(),
        [&](std::size_t i) {
            BranchOptions local = opt;
            local.solve.policy = par::Policy::serial;
            auto row = perp_ladder_at(config, eps_grid[i], count, local);
            for (std::size_t k = 0; k + 1 < row.size(); ++k)
                if (std::abs(row[k + 1] - row[k]) < 10.0 * local.solve.bisect_tol)
                    crossing[i] = true;
            ladders[i] = std::move(row);
        },
        opt.solve.policy);
    return ladders;
}

void finish_branch(EigenBranch& b) {
    const std::size_t n = b.gaps.size();
    b.gaps_decreasing = true;
    for (std::size_t i = (n >= 3 ? n - 3 : 0); i + 1 < n; ++i)
        if (!(b.gaps[i + 1] < b.gaps[i])) b.gaps_decreasing = false;
}

void check_eps_grid(const std::vector<double>& eps_grid) {
    if (eps_grid.size() < 2)
        throw validation_error("branch tracking needs at least 2 eps values");
    for (std::size_t i = 0; i + 1 < eps_grid.size(); ++i)
        if (!(eps_grid[i] > eps_grid[i + 1]))
            throw validation_error("eps grid must decrease strictly");
}

} // namespace

double perp_limit_kth(const CollarConfig& config, int index,
                      const BranchOptions& opt) {
    config.validate();
    if (index < 1) throw validation_error("branch index must be >= 1");
    const double rho_end = std::max(config.profile.value(0.0, config.t_max),
                                    config.profile.value(0.0, config.t_min));
    double lambda_max =
        config.fiber.mu1() * std::pow(rho_end, -2.0 * config.b) + 10.0;
    for (int grow = 0; grow < 24; ++grow) {
        auto ladder = perp_limit_ladder(config, lambda_max, opt);
        int seen = 0;
        for (const auto& e : ladder) {
            seen += e.multiplicity;
            if (seen >= index) return e.lambda;
        }
        lambda_max *= 2.0;
    }
    throw solver_error("perp limit ladder: index not reached");
}

EigenBranch branch_track(const CollarConfig& config, int index,
                         const std::vector<double>& eps_grid,
                         const BranchOptions& opt, std::optional<double> limit) {
    config.validate();
    if (index < 1) throw validation_error("branch index must be >= 1");
    check_eps_grid(eps_grid);

    std::vector<bool> crossing;
    auto ladders = sweep_ladders(config, eps_grid, index + 1, opt, crossing);
    EigenBranch b;
    b.index = index;
    b.eps = eps_grid;
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        b.lambda.push_back(ladders[i][index - 1]);
        b.crossing_flag = b.crossing_flag || crossing[i];
    }
    b.limit = limit ? *limit : perp_limit_kth(config, index, opt);
    for (double l : b.lambda) b.gaps.push_back(std::abs(l - b.limit));
    finish_branch(b);
    return b;
}

std::vector<EigenBranch> branch_track_many(const CollarConfig& config,
                                           const std::vector<int>& indices,
                                           const std::vector<double>& eps_grid,
                                           const BranchOptions& opt) {
    config.validate();
    if (indices.empty()) throw validation_error("no branch indices given");
    check_eps_grid(eps_grid);
    const int top = *std::max_element(indices.begin(), indices.end());

    std::vector<bool> crossing;
    auto ladders = sweep_ladders(config, eps_grid, top + 1, opt, crossing);

    std::vector<EigenBranch> out;
    for (int index : indices) {
        EigenBranch b;
        b.index = index;
        b.eps = eps_grid;
        for (std::size_t i = 0; i < eps_grid.size(); ++i) {
            b.lambda.push_back(ladders[i][index - 1]);
            b.crossing_flag = b.crossing_flag || crossing[i];
        }
        b.limit = perp_limit_kth(config, index, opt);
        for (double l : b.lambda) b.gaps.push_back(std::abs(l - b.limit));
        finish_branch(b);
        out.push_back(std::move(b));
    }
    return out;
}

namespace {

// μ-channel eigenfunction on a window, from the finite-difference problem
// in the Liouville variable: eigenvalue by Sturm bisection, eigenvector by
// inverse iteration, interpolated to the window and pushed back to t.  The
// matrix eigenvector resolves window values that sit many orders of
// magnitude below the eigenfunction peak, which one-sided shooting with a
// bisection-accurate λ cannot.
struct WindowFunction {
    double lambda = 0.0;
    std::vector<double> t, u, du;
};

WindowFunction window_eigenfunction(const CollarConfig& config, double eps,
                                    double mu, int index, double t_lo_dom,
                                    double t_hi_dom, BoundaryCondition bc_left,
                                    BoundaryCondition bc_right, double win_lo,
                                    double win_hi, const ConvergenceOptions& opt) {
    TransformData td(config, eps, t_lo_dom, t_hi_dom);
    SLProblem prob =
        td.schroedinger_problem(mu, bc_left, bc_right, opt.fd_points);
    const int n = opt.fd_points - 1; // mesh cells for the oracle
    WindowFunction wf;
    wf.lambda = matrix_oracle_kth(prob, n, index);
    EigenSolution vec = matrix_oracle_eigenfunction(prob, n, wf.lambda);

    CubicSpline g(vec.t, vec.u); // eigenvector over the s-nodes

    const double bd = config.b * config.d;
    const double a = config.a;
    wf.t.resize(opt.window_points);
    wf.u.resize(opt.window_points);
    wf.du.resize(opt.window_points);
    for (int i = 0; i < opt.window_points; ++i) {
        const double t = win_lo + (win_hi - win_lo) * i / (opt.window_points - 1);
        const double s = td.map().s_of_t(t);
        const double rho = config.profile.value(eps, t);
        const double rho_t = config.profile.d_t(eps, t);
        const double gv = g(s);
        const double gd = g.derivative(s);
        const double amp = std::pow(rho, -0.5 * bd);
        wf.t[i] = t;
        wf.u[i] = amp * gv;
        wf.du[i] = amp * (-0.5 * bd * (rho_t / rho) * gv + std::pow(rho, a) * gd);
    }
    return wf;
}

} // namespace

ConvergenceReport eigenfunction_convergence(const CollarConfig& config,
                                            int channel_index,
                                            const std::vector<double>& eps_grid,
                                            double window_lo, double window_hi,
                                            const ConvergenceOptions& opt) {
    config.validate();
    if (channel_index < 1) throw validation_error("channel index must be >= 1");
    if (!(0.0 < window_lo && window_lo < window_hi && window_hi <= config.t_max))
        throw validation_error("window must satisfy 0 < t_a < t_b <= t_max");
    check_eps_grid(eps_grid);

    const double mu = config.fiber.mu1();
    ConvergenceReport rep;
    rep.channel_index = channel_index;
    rep.window_lo = window_lo;
    rep.window_hi = window_hi;
    rep.eps = eps_grid;

    // ε = 0 weights on the window (the H¹ distance is taken in dV₀)
    const int m = opt.window_points;
    std::vector<double> w0(m), grad_w0(m);
    for (int i = 0; i < m; ++i) {
        const double t = window_lo + (window_hi - window_lo) * i / (m - 1);
        const double rho0 = config.profile.value(0.0, t);
        w0[i] = std::pow(rho0, config.a + config.b * config.d);
        grad_w0[i] = std::pow(rho0, -2.0 * config.a) * w0[i];
    }
    const double h = (window_hi - window_lo) / (m - 1);
    auto wdot = [&](const std::vector<double>& f1, const std::vector<double>& f2,
                    const std::vector<double>& wgt) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            const double trap = (i == 0 || i == m - 1) ? 0.5 : 1.0;
            acc += trap * f1[i] * f2[i] * wgt[i] * h;
        }
        return acc;
    };

    auto normalize = [&](WindowFunction& wf) {
        const double nrm = std::sqrt(wdot(wf.u, wf.u, w0));
        if (!(nrm > 0.0)) throw solver_error("window normalization failed");
        double mean = 0.0, absmean = 0.0;
        for (int i = 0; i < m; ++i) {
            mean += wf.u[i] * w0[i];
            absmean += std::abs(wf.u[i]) * w0[i];
        }
        const double sign = mean >= 0.0 ? 1.0 : -1.0;
        const bool mean_ok = std::abs(mean) > 1e-6 * absmean;
        for (int i = 0; i < m; ++i) {
            wf.u[i] *= sign / nrm;
            wf.du[i] *= sign / nrm;
        }
        return mean_ok;
    };

    // ε-side functions of the μ₁ channel on the full collar
    std::vector<WindowFunction> ue(eps_grid.size());
    par::for_index(eps_grid.size(), [&](std::size_t i) {
        ue[i] = window_eigenfunction(config, eps_grid[i], mu, channel_index,
                                     config.t_min, config.t_max, opt.bc, opt.bc,
                                     window_lo, window_hi, opt);
    });

    // ε = 0 reference: plus-side cusp channel (Dirichlet cut), index chosen
    // by spectral proximity to the finest-ε eigenvalue
    auto u0_at = [&](int index) {
        return window_eigenfunction(config, 0.0, mu, index, opt.limit_t_cut,
                                    config.t_max, BoundaryCondition::dirichlet,
                                    opt.bc, window_lo, window_hi, opt);
    };
    const double lambda_target = ue.back().lambda;
    WindowFunction u0 = u0_at(1);
    double best_gap = std::abs(u0.lambda - lambda_target);
    for (int idx = 2; idx <= channel_index + 1; ++idx) {
        WindowFunction cand = u0_at(idx);
        const double gap = std::abs(cand.lambda - lambda_target);
        if (gap < best_gap) {
            best_gap = gap;
            u0 = std::move(cand);
        }
    }
    rep.limit_lambda = u0.lambda;

    bool all_means_ok = normalize(u0);
    for (auto& wf : ue) all_means_ok = normalize(wf) && all_means_ok;

    // correlation sign convention when a window mean is too close to zero
    if (!all_means_ok) {
        rep.sign_convention = "max-correlation";
        for (auto& wf : ue)
            if (wdot(wf.u, u0.u, w0) < 0.0)
                for (int i = 0; i < m; ++i) {
                    wf.u[i] = -wf.u[i];
                    wf.du[i] = -wf.du[i];
                }
    }

    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        std::vector<double> df(m), ddf(m);
        for (int j = 0; j < m; ++j) {
            df[j] = ue[i].u[j] - u0.u[j];
            ddf[j] = ue[i].du[j] - u0.du[j];
        }
        const double l2sq = wdot(df, df, w0);
        const double h1sq = l2sq + wdot(ddf, ddf, grad_w0);
        rep.lambda.push_back(ue[i].lambda);
        rep.l2_dist.push_back(std::sqrt(l2sq));
        rep.h1_dist.push_back(std::sqrt(h1sq));
    }
    const std::size_t n = rep.l2_dist.size();
    for (std::size_t i = (n >= 3 ? n - 3 : 0); i + 1 < n; ++i)
        if (!(rep.l2_dist[i + 1] < rep.l2_dist[i])) rep.distances_decreasing = false;
    return rep;
}

} // namespace collarspec
