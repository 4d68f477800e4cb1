#pragma once

#include "collarspec/metric_model.hpp"
#include "collarspec/spectrum_assembly.hpp"

#include <span>
#include <vector>

namespace collarspec {

// ── Eigenvalue accumulation law ──────────────────────────────────────────────
//
// For a = −1 the number of collar eigenvalues ≤ Λ grows like
//
//   ( c₊·√(Λ − (c₊bd/2)²)₊ + c₋·√(Λ − (c₋bd/2)²)₊ ) · ln(1/ε) / π + O(1),
//
// with √x₊ = 0 for x < 0.  predicted_count evaluates the leading term; the
// sweep fits observed counts against ln(1/ε) and compares slopes.

double predicted_count(const CollarConfig& config, double lambda_max, double eps);

// Leading coefficient of ln(1/ε) above (the predicted slope).
double predicted_slope(const CollarConfig& config, double lambda_max);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

// Ordinary least squares of y against x; stderr from the residual variance.
LineFit slope_fit(std::span<const double> x, std::span<const double> y);

struct CountReport {
    double lambda_max = 0.0;
    std::vector<double> eps;        // strictly decreasing grid
    std::vector<double> ln_inv_eps; // ln(1/ε)
    std::vector<int> dirichlet;
    std::vector<int> neumann;
    std::vector<double> predicted; // leading-term prediction per ε
    double predicted_slope = 0.0;
    LineFit dirichlet_fit;
    LineFit neumann_fit;
    std::vector<double> residuals; // Dirichlet count − Dirichlet fit
    // per-ε number of contributing channels (for the bracketing bound)
    std::vector<int> channels_dirichlet;
};

// Dirichlet and Neumann collar counts over the ε grid plus slope fits.
// Grid points are independent and solved concurrently under opt.policy.
CountReport count_sweep(const CollarConfig& config, double lambda_max,
                        const std::vector<double>& eps_grid,
                        const SolveOptions& opt = {});

// ── Zero-count law for an integrable potential ───────────────────────────────
//
// For −u″ + r u = μ u on [0, a] with ∫|r| < ∞, the number of eigenvalues in
// [0, M] is a·√M/π + O_M(1).  Counts use the convention that μ = 0 is
// included only when it is an eigenvalue.

enum class DecayingPotential { lorentzian, exponential };

struct ZeroCountRow {
    double a;
    int dirichlet;
    int neumann;
    double predicted; // a√M/π
    double deviation_dirichlet;
    double deviation_neumann;
};

std::vector<ZeroCountRow> classical_count_check(DecayingPotential kind,
                                                double amplitude, double M,
                                                const std::vector<double>& a_grid,
                                                const SolveOptions& opt = {});

} // namespace collarspec
