#pragma once

#include <functional>
#include <string>
#include <vector>

namespace collarspec {

enum class BoundaryCondition { dirichlet, neumann };

std::string to_string(BoundaryCondition bc);
BoundaryCondition bc_from_string(const std::string& name);

// Regular problem −(p u′)′ + q u = λ w u on [t0, t1], p,w > 0.
struct SLProblem {
    std::function<double(double)> p;
    std::function<double(double)> q;
    std::function<double(double)> w;
    double t0 = 0.0;
    double t1 = 1.0;
    BoundaryCondition bc_left = BoundaryCondition::dirichlet;
    BoundaryCondition bc_right = BoundaryCondition::dirichlet;
};

struct PruferOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
};

// Terminal Prüfer phase θ(t1; λ) for the launch θ(t0) = 0 (Dirichlet) or
// π/2 (Neumann), with u = r·sinθ and p u′ = r·cosθ.  Strictly increasing
// in λ; the eigenvalue count below is a floor of this winding.
double prufer_terminal_phase(const SLProblem& problem, double lambda,
                             const PruferOptions& opt = {});

// Number of eigenvalues ≤ lambda (Sturm oscillation count).
int count_eigenvalues(const SLProblem& problem, double lambda,
                      const PruferOptions& opt = {});

// k-th eigenvalue (k ≥ 1) by bisection on the oscillation count: bracket
// doubled from [0,1] (grown downward when negative eigenvalues exist),
// safeguard λ_max = 1e8.  Returns the midpoint of the final bracket of
// width ≤ tol.
double kth_eigenvalue(const SLProblem& problem, int k, double tol = 1e-9,
                      const PruferOptions& opt = {});

// Sampled eigenfunction, w-weighted unit norm.  Sign convention: u′ > 0 at
// the left endpoint for Dirichlet, u > 0 for Neumann.
struct EigenSolution {
    double lambda = 0.0;
    std::vector<double> t;
    std::vector<double> u;
    std::vector<double> du; // u′
};

// Recovers the eigenfunction at `lambda` on `grid` (ascending, inside
// [t0,t1]) by two-sided log-scaled Prüfer shooting matched at an interior
// point.  Throws solver_error if lambda is not an eigenvalue to tolerance.
EigenSolution eigenfunction(const SLProblem& problem, double lambda,
                            const std::vector<double>& grid,
                            const PruferOptions& opt = {});

// Independent finite-difference oracle: eigenvalues of the three-point
// discretization with p at midpoints, q and w at nodes, boundary
// conditions by row modification.  n ≥ 16 is the number of mesh cells.
// Returns all discrete eigenvalues, ascending.
std::vector<double> matrix_oracle(const SLProblem& problem, int n);

// k-th discrete eigenvalue (1-based) of the same discretization, found by
// Sturm-sequence bisection inside Gershgorin bounds; much cheaper than the
// full list when only a few eigenvalues are needed.
double matrix_oracle_kth(const SLProblem& problem, int n, int k);

// Oracle eigenvector for the discrete eigenvalue nearest `lambda`
// (inverse iteration), w-weighted unit norm, sampled on the oracle nodes.
EigenSolution matrix_oracle_eigenfunction(const SLProblem& problem, int n,
                                          double lambda);

} // namespace collarspec
