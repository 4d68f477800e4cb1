#pragma once

#include "collarspec/cusp_analysis.hpp"
#include "collarspec/metric_model.hpp"
#include "collarspec/spectrum_assembly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace collarspec {

// ── Eigenvalue branches of Δ⊥ down to ε = 0 ──────────────────────────────────

struct EigenBranch {
    int index = 0;               // position in the merged Δ⊥ ladder (1-based)
    std::vector<double> eps;     // strictly decreasing
    std::vector<double> lambda;  // λ_index(ε)
    double limit = 0.0;          // λ_index(0)
    std::vector<double> gaps;    // |λ_index(ε) − limit|
    bool gaps_decreasing = true; // over the last three grid points
    bool crossing_flag = false;  // a neighbour branch within bisection tolerance
};

struct BranchOptions {
    BoundaryCondition bc = BoundaryCondition::dirichlet; // outer ends
    std::vector<double> limit_t_cuts = {1e-2, 1e-3, 1e-4};
    SolveOptions solve;
};

// i-th eigenvalue of the merged Δ⊥ ladder at ε = 0: extrapolated truncated
// cusp eigenvalues from both sides, all contributing fiber modes, counted
// with multiplicity.
double perp_limit_kth(const CollarConfig& config, int index,
                      const BranchOptions& opt = {});

// λ_index(ε) over the grid and its gap to the ε = 0 limit.  When `limit`
// is given the cusp extrapolation is skipped (ε-independent families).
EigenBranch branch_track(const CollarConfig& config, int index,
                         const std::vector<double>& eps_grid,
                         const BranchOptions& opt = {},
                         std::optional<double> limit = {});

// Several branches from one sweep of per-ε spectra.
std::vector<EigenBranch> branch_track_many(const CollarConfig& config,
                                           const std::vector<int>& indices,
                                           const std::vector<double>& eps_grid,
                                           const BranchOptions& opt = {});

// ── Eigenfunction convergence on a compact window ────────────────────────────
//
// Compares normalized μ₁-channel eigenfunctions u_ε against the cusp limit
// u_0 on a window [t_a, t_b] ⊂ (0, t₊].  Both are computed from the
// finite-difference discretization in the Liouville variable (the matrix
// eigenvector resolves the exponentially small window values that one-sided
// shooting cannot).  Norms and distances use the ε = 0 weights.

struct ConvergenceReport {
    int channel_index = 1; // index within the μ₁ radial channel
    double window_lo = 0.0, window_hi = 0.0;
    std::vector<double> eps;
    std::vector<double> lambda;  // FD channel eigenvalue per ε
    std::vector<double> l2_dist; // L²(window, w₀ dt)
    std::vector<double> h1_dist; // adds the ρ₀^{−2a}-weighted derivative term
    double limit_lambda = 0.0;
    bool distances_decreasing = true; // over the final three ε values
    std::string sign_convention = "window-mean";
};

struct ConvergenceOptions {
    int fd_points = 6001;      // transform-variable grid
    int window_points = 257;   // uniform window samples
    double limit_t_cut = 1e-5; // truncation for the ε = 0 reference
    BoundaryCondition bc = BoundaryCondition::dirichlet;
};

ConvergenceReport eigenfunction_convergence(const CollarConfig& config,
                                            int channel_index,
                                            const std::vector<double>& eps_grid,
                                            double window_lo, double window_hi,
                                            const ConvergenceOptions& opt = {});

} // namespace collarspec
