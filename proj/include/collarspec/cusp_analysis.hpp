#pragma once

#include "collarspec/liouville_transform.hpp"
#include "collarspec/metric_model.hpp"
#include "collarspec/spectrum_assembly.hpp"

#include <vector>

namespace collarspec {

// ── Truncated cusp eigenproblems (ε = 0) ─────────────────────────────────────
//
// At ε = 0 the collar splits into two cusps with ρ = c±|t|.  Fiber channels
// with μ > 0 are solved on [t_cut, outer] with Dirichlet truncation at t_cut
// (cusp forms vanish there to all orders, so the truncation error decays
// faster than any power of t_cut).  Solves run in the Liouville variable
// where the cusp is a half-line with a smooth potential wall.

enum class Side { minus, plus };
std::string to_string(Side side);
Side side_from_string(const std::string& name);

struct CuspProblem {
    CollarConfig config;
    Side side = Side::plus;
    double mu = 0.0;    // fiber eigenvalue, > 0
    double t_cut = 0.0; // 0 < t_cut < |outer endpoint|
    BoundaryCondition outer_bc = BoundaryCondition::dirichlet;
    // Dirichlet truncation by default; Neumann available for bracketing.
    BoundaryCondition cut_bc = BoundaryCondition::dirichlet;

    void validate() const;
    double outer() const; // |outer endpoint| of the chosen side
};

// Schrödinger form of the truncated cusp channel on s ∈ [0, α(outer)],
// with the cut at s = 0.
SLProblem cusp_channel_problem(const CuspProblem& problem,
                               const SolveOptions& opt = {});

struct TruncationTable {
    std::vector<double> t_cuts; // decreasing
    // eigen[i][j]: j-th eigenvalue at t_cuts[i] (≤ Λ at the finest cut)
    std::vector<std::vector<double>> eigen;
    std::vector<double> extrapolated; // per eigenvalue index
    std::vector<bool> index_converged;
    bool converged = true; // all indices passed the difference-decay test
};

// Eigenvalues ≤ Λ of each truncated problem plus a Richardson-style
// (Aitken) extrapolation in t_cut.  A non-convergent sequence is flagged
// and the raw table still returned.
TruncationTable cusp_eigenvalues(const CuspProblem& problem, double lambda_max,
                                 const std::vector<double>& t_cut_sequence,
                                 double decrease_factor = 0.5,
                                 const SolveOptions& opt = {});

// Radial eigenfunction of a truncated cusp channel.  Magnitudes are kept in
// log form: the function decays below the double-precision floor near the
// tip.  u and du are w-normalized and underflow to zero where they should.
struct CuspEigenfunction {
    double lambda = 0.0;
    double mu = 0.0;
    Side side = Side::plus;
    double t_cut = 0.0;
    double a = -1.0, b = 1.0; // metric exponents of the problem
    int d = 1;
    std::vector<double> s;      // uniform transform-variable grid
    std::vector<double> t;      // |t| increasing away from the cusp tip
    std::vector<double> log_g2; // log g(s)², g the transformed eigenfunction
    std::vector<double> u, du;  // radial function and d/dt at the t samples
    std::vector<double> log_u2; // log u(t)²
    std::vector<double> log_rho;   // log ρ(0, t)
    std::vector<double> potential; // conjugated potential V(s)
};

CuspEigenfunction cusp_eigenfunction(const CuspProblem& problem, double lambda,
                                     int n_samples = 4001,
                                     const SolveOptions& opt = {});

// ── Decay and convexity diagnostics ──────────────────────────────────────────

struct DecayVerdict {
    double j = 0.0;
    bool monotone = false;  // t^{−j}·u² decreasing toward the tip
    double drop_log = 0.0;  // log decrease across the inner window
    bool pass = false;
};

struct DecayReport {
    std::vector<DecayVerdict> per_j;
    // discrete convexity of the transformed fiber norm in s
    bool convexity_pass = false;
    int convexity_violations = 0;
    // pointwise surrogate L(u²) ≥ 2(μρ^{−2b} − λ)u²
    bool surrogate_pass = false;
    int surrogate_violations = 0;
    bool pass() const;
};

// Checks t^{−j}u² ↓ 0 on the inner 20% of the grid for each j, discrete
// convexity of the transformed u², and the pointwise lower bound on L(u²).
DecayReport decay_check(const CuspEigenfunction& fn,
                        const std::vector<double>& j_list);

// ∫ (∂_t u)²·ρ^{−2a}·ρ^{a+bd} dt over [t_cut, outer]: the radial part of
// the gradient energy.  Finite for cusp forms.
double gradient_energy(const CuspEigenfunction& fn);

struct GradientTable {
    std::vector<double> t_cuts;
    std::vector<double> values;
    std::vector<double> rel_change; // |Δ|/value between successive cuts
    bool stabilized = false;        // last relative change below threshold
};

// gradient_energy along a truncation sequence for the eigenvalue with the
// given channel index; stabilization threshold is relative.
GradientTable gradient_integrability(const CuspProblem& problem, int index,
                                     const std::vector<double>& t_cut_sequence,
                                     double stabilize_tol = 0.01,
                                     const SolveOptions& opt = {});

} // namespace collarspec
