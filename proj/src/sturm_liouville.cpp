#include "collarspec/sturm_liouville.hpp"

#include "collarspec/errors.hpp"
#include "collarspec/ode.hpp"
#include "collarspec/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace collarspec {

std::string to_string(BoundaryCondition bc) {
    return bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann";
}

BoundaryCondition bc_from_string(const std::string& name) {
    if (name == "dirichlet") return BoundaryCondition::dirichlet;
    if (name == "neumann") return BoundaryCondition::neumann;
    throw validation_error("unknown boundary condition '" + name + "'");
}

namespace {

double launch_phase(BoundaryCondition bc) {
    return bc == BoundaryCondition::dirichlet ? 0.0 : M_PI / 2.0;
}

OdeOptions ode_options(const PruferOptions& opt) {
    OdeOptions o;
    o.rel_tol = opt.rel_tol;
    o.abs_tol = opt.abs_tol;
    return o;
}

// Problem reflected through the interval midpoint of [t0, t1], used for
// the right-to-left shooting pass.
SLProblem reflect(const SLProblem& prob) {
    SLProblem r = prob;
    const double pivot = prob.t0 + prob.t1;
    auto p = prob.p;
    auto q = prob.q;
    auto w = prob.w;
    r.p = [p, pivot](double t) { return p(pivot - t); };
    r.q = [q, pivot](double t) { return q(pivot - t); };
    r.w = [w, pivot](double t) { return w(pivot - t); };
    r.bc_left = prob.bc_right;
    r.bc_right = prob.bc_left;
    return r;
}

} // namespace

double prufer_terminal_phase(const SLProblem& problem, double lambda,
                             const PruferOptions& opt) {
    auto rhs = [&](double t, const std::array<double, 1>& y,
                   std::array<double, 1>& dy) {
        const double c = std::cos(y[0]);
        const double s = std::sin(y[0]);
        dy[0] = c * c / problem.p(t) + (lambda * problem.w(t) - problem.q(t)) * s * s;
    };
    std::array<double, 1> y{launch_phase(problem.bc_left)};
    y = integrate_ode<1>(rhs, y, problem.t0, problem.t1, ode_options(opt));
    return y[0];
}

int count_eigenvalues(const SLProblem& problem, double lambda,
                      const PruferOptions& opt) {
    const double theta = prufer_terminal_phase(problem, lambda, opt);
    const double offset =
        problem.bc_right == BoundaryCondition::neumann ? 0.5 : 0.0;
    const int n = static_cast<int>(std::floor(theta / M_PI + offset));
    return std::max(n, 0);
}

double kth_eigenvalue(const SLProblem& problem, int k, double tol,
                      const PruferOptions& opt) {
    if (k < 1) throw validation_error("kth_eigenvalue: k must be >= 1");
    if (!(tol > 0.0)) throw validation_error("kth_eigenvalue: tol must be positive");
    constexpr double lambda_max = 1e8;

    double lo = 0.0;
    double hi = 1.0;
    // grow the bracket downward first in case of negative spectrum
    while (count_eigenvalues(problem, lo, opt) >= k) {
        hi = lo;
        lo = (lo == 0.0) ? -1.0 : 2.0 * lo;
        if (lo < -lambda_max)
            throw solver_error("kth_eigenvalue: no lower bracket above -1e8");
    }
    while (count_eigenvalues(problem, hi, opt) < k) {
        lo = hi;
        hi *= 2.0;
        if (hi > lambda_max)
            throw solver_error("kth_eigenvalue: bracket not found below 1e8");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (count_eigenvalues(problem, mid, opt) >= k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// One-sided Prüfer pass in (θ, log r): u = r sinθ, p u′ = r cosθ.
// Launch amplitude is log r = 0 at the starting endpoint.
struct ShootSample {
    double theta;
    double logr;
};

std::vector<ShootSample> shoot_logprufer(const SLProblem& prob, double lambda,
                                         const std::vector<double>& pts,
                                         const PruferOptions& opt) {
    auto rhs = [&](double t, const std::array<double, 2>& y,
                   std::array<double, 2>& dy) {
        const double c = std::cos(y[0]);
        const double s = std::sin(y[0]);
        const double ip = 1.0 / prob.p(t);
        const double g = lambda * prob.w(t) - prob.q(t);
        dy[0] = c * c * ip + g * s * s;
        dy[1] = s * c * (ip - g);
    };
    std::vector<ShootSample> out;
    out.reserve(pts.size());
    std::array<double, 2> y{launch_phase(prob.bc_left), 0.0};
    double t = prob.t0;
    for (double target : pts) {
        y = integrate_ode<2>(rhs, y, t, target, ode_options(opt));
        t = target;
        out.push_back({y[0], y[1]});
    }
    return out;
}

double simpson_or_trapezoid(const std::vector<double>& x,
                            const std::vector<double>& f) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    const double h = x[1] - x[0];
    bool uniform = true;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (std::abs((x[i + 1] - x[i]) - h) > 1e-12 * (std::abs(h) + 1e-300)) {
            uniform = false;
            break;
        }
    if (uniform && n % 2 == 1) {
        double s = f[0] + f[n - 1];
        for (std::size_t i = 1; i + 1 < n; ++i) s += f[i] * (i % 2 ? 4.0 : 2.0);
        return s * h / 3.0;
    }
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        s += 0.5 * (f[i] + f[i + 1]) * (x[i + 1] - x[i]);
    return s;
}

} // namespace

EigenSolution eigenfunction(const SLProblem& problem, double lambda,
                            const std::vector<double>& grid,
                            const PruferOptions& opt) {
    const std::size_t n = grid.size();
    if (n < 3) throw validation_error("eigenfunction: grid too small");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(grid[i] < grid[i + 1]))
            throw validation_error("eigenfunction: grid must increase");
    if (grid.front() < problem.t0 - 1e-12 || grid.back() > problem.t1 + 1e-12)
        throw validation_error("eigenfunction: grid outside the interval");

    // full left and right passes; the matching index is chosen afterwards
    auto left = shoot_logprufer(problem, lambda, grid, opt);

    SLProblem refl = reflect(problem);
    const double pivot = problem.t0 + problem.t1;
    std::vector<double> right_pts;
    right_pts.reserve(n);
    for (std::size_t i = n; i-- > 0;) right_pts.push_back(pivot - grid[i]);
    auto right = shoot_logprufer(refl, lambda, right_pts, opt);
    auto right_at = [&](std::size_t i) -> const ShootSample& {
        return right[n - 1 - i];
    };

    // matching point in the middle third where neither side sits on a node
    std::size_t im = n / 2;
    double best = -1.0;
    for (std::size_t i = n / 3; i <= 2 * n / 3 && i < n; ++i) {
        const double score = std::min(std::abs(std::sin(left[i].theta)),
                                      std::abs(std::sin(right_at(i).theta)));
        if (score > best) {
            best = score;
            im = i;
        }
    }

    // for a true eigenvalue the Wronskian vanishes: θ_L + θ_R ≡ 0 (mod π)
    const double thL = left[im].theta;
    const double thR = right_at(im).theta;
    const double mismatch = std::abs(std::sin(thL + thR));
    if (mismatch > 1e-4)
        throw solver_error("eigenfunction: lambda is not an eigenvalue "
                           "(boundary mismatch " +
                           std::to_string(mismatch) + ")");

    // u_L = exp(lrL)·sin θL;  u_R(t) = σ·exp(lrR)·sin θR, p u_R′ = −σ·exp(lrR)·cos θR
    const double sL = std::sin(thL), sR = std::sin(thR);
    if (sL == 0.0 || sR == 0.0)
        throw solver_error("eigenfunction: matching point hits a node");
    const double log_scale = (left[im].logr + std::log(std::abs(sL))) -
                             (right_at(im).logr + std::log(std::abs(sR)));
    const double sign_scale = (sL > 0) == (sR > 0) ? 1.0 : -1.0;

    // assemble log-magnitude samples, then exponentiate relative to the max
    std::vector<double> t(grid), u(n), du(n);
    std::vector<double> logmag(n), val_u(n), val_pu(n);
    double logmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= im; ++i) {
        logmag[i] = left[i].logr;
        val_u[i] = std::sin(left[i].theta);
        val_pu[i] = std::cos(left[i].theta);
        logmax = std::max(logmax, logmag[i]);
    }
    for (std::size_t i = im + 1; i < n; ++i) {
        const auto& rr = right_at(i);
        logmag[i] = rr.logr + log_scale;
        val_u[i] = sign_scale * std::sin(rr.theta);
        val_pu[i] = -sign_scale * std::cos(rr.theta);
        logmax = std::max(logmag[i], logmax);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double amp = std::exp(logmag[i] - logmax);
        u[i] = amp * val_u[i];
        du[i] = amp * val_pu[i] / problem.p(grid[i]);
    }

    // w-weighted normalization on the grid
    std::vector<double> integrand(n);
    for (std::size_t i = 0; i < n; ++i)
        integrand[i] = u[i] * u[i] * problem.w(grid[i]);
    const double nrm = std::sqrt(simpson_or_trapezoid(grid, integrand));
    if (!(nrm > 0.0)) throw solver_error("eigenfunction: zero norm");

    // sign convention at the left endpoint
    double sign = 1.0;
    if (problem.bc_left == BoundaryCondition::dirichlet) {
        if (du[0] < 0.0) sign = -1.0;
    } else {
        if (u[0] < 0.0) sign = -1.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        u[i] *= sign / nrm;
        du[i] *= sign / nrm;
    }
    return {lambda, std::move(t), std::move(u), std::move(du)};
}

namespace {

struct Discretization {
    Tridiagonal matrix;       // symmetric reduced form
    std::vector<double> node; // unknown locations
    std::vector<double> mass; // w_i · cell_i  (the L²(w) weights)
};

Discretization discretize(const SLProblem& prob, int n) {
    if (n < 16) throw validation_error("matrix_oracle: n must be >= 16");
    const double h = (prob.t1 - prob.t0) / n;
    const bool dl = prob.bc_left == BoundaryCondition::dirichlet;
    const bool dr = prob.bc_right == BoundaryCondition::dirichlet;
    const int i0 = dl ? 1 : 0;
    const int i1 = dr ? n - 1 : n;
    const int m = i1 - i0 + 1;

    std::vector<double> pm(n); // p at cell midpoints
    for (int i = 0; i < n; ++i)
        pm[i] = prob.p(prob.t0 + (i + 0.5) * h);

    Discretization d;
    d.node.resize(m);
    d.mass.resize(m);
    std::vector<double> stiff_diag(m), stiff_off(m - 1);
    for (int ii = 0; ii < m; ++ii) {
        const int i = i0 + ii;
        const double t = prob.t0 + i * h;
        d.node[ii] = t;
        const bool boundary = (i == 0) || (i == n);
        const double cell = boundary ? 0.5 * h : h;
        d.mass[ii] = prob.w(t) * cell;
        double k = 0.0;
        if (i > 0) k += pm[i - 1] / h;
        if (i < n) k += pm[i] / h;
        stiff_diag[ii] = k + prob.q(t) * cell;
        if (ii + 1 < m) stiff_off[ii] = -pm[i] / h;
        if (!std::isfinite(stiff_diag[ii]) || !std::isfinite(d.mass[ii]) ||
            !(d.mass[ii] > 0.0))
            throw solver_error("matrix_oracle: non-finite discretization near t=" +
                               std::to_string(t));
    }
    // generalized problem (K+Q) u = λ W u reduced by W^{-1/2} on both sides
    d.matrix.diag.resize(m);
    d.matrix.off.resize(m - 1);
    for (int ii = 0; ii < m; ++ii)
        d.matrix.diag[ii] = stiff_diag[ii] / d.mass[ii];
    for (int ii = 0; ii + 1 < m; ++ii)
        d.matrix.off[ii] = stiff_off[ii] / std::sqrt(d.mass[ii] * d.mass[ii + 1]);
    return d;
}

} // namespace

std::vector<double> matrix_oracle(const SLProblem& problem, int n) {
    return tridiag_eigenvalues(discretize(problem, n).matrix);
}

double matrix_oracle_kth(const SLProblem& problem, int n, int k) {
    if (k < 1) throw validation_error("matrix_oracle_kth: k must be >= 1");
    const Tridiagonal m = discretize(problem, n).matrix;
    if (k > static_cast<int>(m.diag.size()))
        throw validation_error("matrix_oracle_kth: k exceeds the matrix size");
    double lo = m.diag[0], hi = m.diag[0];
    for (std::size_t i = 0; i < m.diag.size(); ++i) {
        const double r = (i > 0 ? std::abs(m.off[i - 1]) : 0.0) +
                         (i + 1 < m.diag.size() ? std::abs(m.off[i]) : 0.0);
        lo = std::min(lo, m.diag[i] - r);
        hi = std::max(hi, m.diag[i] + r);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (std::abs(lo) + std::abs(hi) + 1.0);
         ++it) {
        const double mid = 0.5 * (lo + hi);
        // eigenvalues strictly below mid plus those equal: use <= via count
        if (tridiag_count_below(m, mid) >= k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

EigenSolution matrix_oracle_eigenfunction(const SLProblem& problem, int n,
                                          double lambda) {
    Discretization d = discretize(problem, n);
    auto evs = tridiag_eigenvalues(d.matrix);
    double nearest = evs.front();
    for (double v : evs)
        if (std::abs(v - lambda) < std::abs(nearest - lambda)) nearest = v;
    auto x = tridiag_eigenvector(d.matrix, nearest);
    const std::size_t m = x.size();
    EigenSolution sol;
    sol.lambda = nearest;
    sol.t = d.node;
    sol.u.resize(m);
    for (std::size_t i = 0; i < m; ++i) sol.u[i] = x[i] / std::sqrt(d.mass[i]);
    // Σ u²·w·cell = Σ x² = 1 already; fix the sign convention
    double sign = 1.0;
    if (problem.bc_left == BoundaryCondition::dirichlet) {
        if (sol.u.front() + sol.u[1] < 0.0) sign = -1.0;
    } else if (sol.u.front() < 0.0) {
        sign = -1.0;
    }
    sol.du.resize(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) sol.u[i] *= sign;
    for (std::size_t i = 1; i + 1 < m; ++i)
        sol.du[i] = (sol.u[i + 1] - sol.u[i - 1]) / (sol.t[i + 1] - sol.t[i - 1]);
    if (m >= 2) {
        sol.du[0] = (sol.u[1] - sol.u[0]) / (sol.t[1] - sol.t[0]);
        sol.du[m - 1] = (sol.u[m - 1] - sol.u[m - 2]) / (sol.t[m - 1] - sol.t[m - 2]);
    }
    return sol;
}

} // namespace collarspec
