#pragma once

#include "collarspec/metric_model.hpp"
#include "collarspec/parallel.hpp"
#include "collarspec/sturm_liouville.hpp"

#include <string>
#include <vector>

namespace collarspec {

// ── Direct-sum spectrum over fiber channels ──────────────────────────────────
//
// The collar Laplacian block-diagonalizes over fiber modes: each μ_k spawns
// the radial problem of sl_coefficients.  A channel whose lowest possible
// eigenvalue μ_k·(max_I ρ)^{−2b} already exceeds Λ is certified empty and
// skipped.

struct SolveOptions {
    double bisect_tol = 1e-9;
    PruferOptions prufer;
    par::Policy policy = par::default_policy();
    // when > 0, at most this many eigenvalues are resolved per channel;
    // counts are still exact (ladder queries need only a prefix)
    int max_per_channel = 0;
};

struct ChannelSpectrum {
    int mode_index = 0; // k in the fiber ladder (0 = constant mode)
    double mu = 0.0;
    int multiplicity = 1;
    std::vector<double> values; // channel eigenvalues ≤ Λ, ascending
};

struct SpectrumEntry {
    double lambda;
    int mode_index;
    double mu;
    int channel_index; // 1-based index within the channel
    int multiplicity;
};

struct ModeIndexedSpectrum {
    BoundaryCondition bc = BoundaryCondition::dirichlet;
    double lambda_max = 0.0;
    double rho_max = 0.0;   // max_I ρ(ε,·) used for the cutoff
    double mu_cutoff = 0.0; // channels with μ above this are certified empty:
                            // every eigenvalue obeys λ ≥ μ·(max ρ)^{−2b} > Λ
    std::vector<ChannelSpectrum> channels;
    std::vector<SpectrumEntry> merged; // sorted by (λ, mode, channel index)

    int total_count() const; // Σ multiplicity · channel count
    // i-th eigenvalue (1-based) counting fiber multiplicities
    double kth(int i) const;
};

// Full collar spectrum up to Λ for ε > 0.
ModeIndexedSpectrum collar_spectrum(const CollarConfig& config, double eps,
                                    double lambda_max, BoundaryCondition bc,
                                    const SolveOptions& opt = {});

// Spectrum of Δ⊥ (constant mode removed); all values strictly positive.
ModeIndexedSpectrum perp_spectrum(const CollarConfig& config, double eps,
                                  double lambda_max, BoundaryCondition bc,
                                  const SolveOptions& opt = {});

// Counts only (no bisection): per-channel eigenvalue counts ≤ Λ.
struct ChannelCount {
    int mode_index;
    double mu;
    int multiplicity;
    int count;
};
std::vector<ChannelCount> collar_counts(const CollarConfig& config, double eps,
                                        double lambda_max, BoundaryCondition bc,
                                        const SolveOptions& opt = {});
int total_count(const std::vector<ChannelCount>& counts);

// ── Essential spectrum classification ────────────────────────────────────────

enum class SpectralRegime { marginally_complete, overcomplete };

struct EssentialSpectrum {
    SpectralRegime regime;
    double bottom; // band edge m: min over sides of (c± b d/2)² if a = −1, else 0
};

std::string to_string(SpectralRegime regime);

// Requires a ≤ −1; a > −1 is rejected.
EssentialSpectrum essential_spectrum_bottom(const CollarConfig& config);

} // namespace collarspec
