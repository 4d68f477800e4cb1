#pragma once

#include "collarspec/sturm_liouville.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace collarspec {

// ── Collar profile ρ(ε,t) ────────────────────────────────────────────────────
//
// The warped-product metric on the collar I×M is
//
//     g = ρ(ε,t)^{2a}·dt² + ρ(ε,t)^{2b}·h,
//
// where ρ is positive away from (0,0), positively homogeneous of degree 1,
// and smooth away from the origin.  Profiles carry analytic ∂_t and ∂²_tt
// evaluators; the Schrödinger-form potential of the radial operator is
// second-derivative-sensitive, so derivatives are never taken numerically.

enum class ProfileKind { hyperbolic, linear_pair, custom_analytic };

struct ProfileRho {
    ProfileKind kind = ProfileKind::hyperbolic;
    std::vector<double> params;

    std::function<double(double, double)> value; // ρ(ε,t)
    std::function<double(double, double)> d_t;   // ∂_t ρ
    std::function<double(double, double)> d_tt;  // ∂²_tt ρ

    double operator()(double eps, double t) const { return value(eps, t); }
};

// Catalog:
//   hyperbolic       ρ = √(ε²+t²)                        (no params)
//   linear_pair      ρ(0,t) = c∓·|t|, smooth C² switch of the slope across
//                    |t| ≤ ε for ε>0; exactly homogeneous  (params c₋, c₊)
//   custom_analytic  κ·√(ε²+t²)                           (params κ)
ProfileRho make_profile(ProfileKind kind, const std::vector<double>& params = {});

ProfileKind profile_kind_from_string(const std::string& name);
std::string to_string(ProfileKind kind);

// Profile reflected through t = 0 (swaps the two cusp sides).
ProfileRho mirror_profile(const ProfileRho& profile);

struct HomogeneityConstants {
    double c_minus;
    double c_plus;
};

// c± = ρ(0, ±1); both positive for a valid profile.
HomogeneityConstants homogeneity_constants(const ProfileRho& profile);

// ── Fiber spectrum ───────────────────────────────────────────────────────────
//
// Eigenvalues 0 = μ₀ < μ₁ ≤ μ₂ ≤ … of the fiber Laplacian Δ_h with
// multiplicities.  Each μ_k spawns one radial Sturm–Liouville channel.

struct FiberMode {
    double mu;
    int multiplicity;
};

enum class FiberSource { circle, flat_torus, explicit_list };

class FiberSpectrum {
  public:
    static FiberSpectrum circle(double circumference);
    static FiberSpectrum flat_torus(std::vector<double> lengths);
    static FiberSpectrum explicit_list(std::vector<FiberMode> entries);

    // All modes with μ ≤ mu_max, nondecreasing, starting at (0,1).
    std::vector<FiberMode> modes_up_to(double mu_max) const;

    double mu1() const; // smallest nonzero eigenvalue
    FiberSource source() const { return source_; }
    int intrinsic_dimension() const; // 0 when the source does not fix one

  private:
    FiberSpectrum() = default;
    FiberSource source_ = FiberSource::explicit_list;
    double circumference_ = 0.0;
    std::vector<double> lengths_;
    std::vector<FiberMode> entries_; // explicit_list only
};

// ── Collar configuration ─────────────────────────────────────────────────────

struct CollarConfig {
    double a = -1.0; // metric exponent, a ≤ −1
    double b = 1.0;  // metric exponent, b > 0
    int d = 1;       // fiber dimension
    double t_min = -1.0;
    double t_max = 1.0;
    ProfileRho profile;
    FiberSpectrum fiber = FiberSpectrum::circle(1.0);

    void validate() const; // throws validation_error with the violated precondition
};

// Radial problem of the fiber-μ channel:
//
//   p = ρ^{−a+bd},  w = ρ^{a+bd},  q = μ·ρ^{a+bd−2b},
//
// so that −(p u′)′ + q u = λ w u is the eigenvalue equation of
// −L + μ ρ^{−2b} in L²(I, ρ^{a+bd} dt).  Boundary conditions default to
// Dirichlet at both ends.  ε = 0 requires an interval avoiding t = 0.
SLProblem sl_coefficients(const CollarConfig& config, double eps, double mu);

// As above on a sub-interval [t0, t1] of the collar.
SLProblem sl_coefficients(const CollarConfig& config, double eps, double mu,
                          double t0, double t1);

// max of ρ(ε,·) over [t0, t1]: coarse scan plus golden-section refinement.
double max_profile_on_interval(const ProfileRho& profile, double eps, double t0,
                               double t1);

} // namespace collarspec
