#pragma once

#include "collarspec/metric_model.hpp"
#include "collarspec/quadrature.hpp"
#include "collarspec/spline.hpp"
#include "collarspec/sturm_liouville.hpp"

#include <memory>
#include <vector>

namespace collarspec {

// ── Liouville transform ──────────────────────────────────────────────────────
//
// s = α(t) = ∫_{t₀}^t ρ^a(ε,u) du rectifies the radial operator: the unitary
// map U(f) = ρ^{−bd/2}·α*(f) conjugates −L into Schrödinger form −∂_s² + V
// with
//
//   V = (bd/2) · ρ^{−2a−2} ( ρ·ρ″_tt + ((bd−2a−2)/2)·(ρ′_t)² )  ∘ α^{−1}.
//
// For ε = 0 and a = −1 the potential is the constant (c± b d / 2)² on each
// side of the cusp.

// Quadrature value of α(t); requires ε > 0, or ε = 0 with t and t0 on the
// same side of the singular point 0.
double alpha_integral(const CollarConfig& config, double eps, double t,
                      double t0, const QuadOptions& quad = {});

// Default base point: 0 for ε > 0; for ε = 0 the interval endpoint nearer 0.
double default_alpha_base(double eps, double t_lo, double t_hi);

// Monotone map s = α(t) on [t_lo, t_hi], built from cumulative panels.
// Both directions are quadrature-exact: t_of_s polishes a bracketed Newton
// iterate against the panel sums (tolerance 1e−12 in t).
class AlphaMap {
  public:
    AlphaMap(const CollarConfig& config, double eps, double t_lo, double t_hi,
             double t0, const QuadOptions& quad = {});

    double s_of_t(double t) const;
    double t_of_s(double s) const;

    double t_lo() const { return t_knots_.front(); }
    double t_hi() const { return t_knots_.back(); }
    double s_lo() const { return s_knots_.front(); }
    double s_hi() const { return s_knots_.back(); }
    double base() const { return t0_; }

  private:
    std::function<double(double)> density_; // ρ^a(ε,·) = α′
    std::vector<double> t_knots_, s_knots_;
    double t0_ = 0.0;
    QuadOptions quad_;
};

// Local value of the bracketed potential expression at parameter t.
double conjugated_potential_at_t(const CollarConfig& config, double eps, double t);

// Precomputed transform for one (config, ε, sub-interval): the bijection,
// the potential V(s), and the pushforward U.
class TransformData {
  public:
    TransformData(const CollarConfig& config, double eps, double t_lo,
                  double t_hi, const QuadOptions& quad = {});

    const AlphaMap& map() const { return map_; }
    double s_lo() const { return map_.s_lo(); }
    double s_hi() const { return map_.s_hi(); }

    // V(s); s must lie in the range of α.
    double potential(double s) const;

    // Schrödinger form of the fiber-μ channel: p = w = 1,
    // q(s) = V(s) + μ·ρ(t(s))^{−2b}.  Potential samples are cached on a
    // dense grid and interpolated; n_cache controls the grid.
    SLProblem schroedinger_problem(double mu, BoundaryCondition bc_left,
                                   BoundaryCondition bc_right,
                                   int n_cache = 4001) const;

    // (U f)(t) = ρ^{−bd/2}(ε,t)·f(α(t)) for samples f_i on the s-grid;
    // returns pairs (t_i, (Uf)(t_i)) with t_i = α^{−1}(s_i).
    struct PushedSamples {
        std::vector<double> t;
        std::vector<double> values;
    };
    PushedSamples unitary_push(const std::vector<double>& s_grid,
                               const std::vector<double>& f_samples) const;

    double eps() const { return eps_; }
    const CollarConfig& config() const { return config_; }

  private:
    CollarConfig config_;
    double eps_;
    AlphaMap map_;
};

} // namespace collarspec
