#include "collarspec/metric_model.hpp"

#include "collarspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace collarspec {

namespace {

// C² quintic smoothstep: σ(0)=0, σ(1)=1, σ′=σ″=0 at both ends.
double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}
double smoothstep_d(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return u * u * (30.0 + u * (-60.0 + 30.0 * u));
}
double smoothstep_dd(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return u * (60.0 + u * (-180.0 + 120.0 * u));
}

ProfileRho scaled_hyperbolic(double kappa) {
    ProfileRho p;
    p.kind = ProfileKind::custom_analytic;
    p.params = {kappa};
    p.value = [kappa](double e, double t) { return kappa * std::hypot(e, t); };
    p.d_t = [kappa](double e, double t) {
        const double r = std::hypot(e, t);
        return kappa * t / r;
    };
    p.d_tt = [kappa](double e, double t) {
        const double r = std::hypot(e, t);
        return kappa * e * e / (r * r * r);
    };
    return p;
}

// Slope switch for the linear-pair profile.  For ε > 0,
//   ρ(ε,t) = √(ε² + m(ε,t)²),   m = c(t/ε)·t,
// where c(x) interpolates c₋ → c₊ smoothly on |x| ≤ 1.  Writing the switch
// in x = t/ε keeps ρ exactly homogeneous of degree 1.
struct LinearPair {
    double cm, cp;

    double c(double x) const { return cm + (cp - cm) * smoothstep(0.5 * (x + 1.0)); }
    double c_d(double x) const { return 0.5 * (cp - cm) * smoothstep_d(0.5 * (x + 1.0)); }
    double c_dd(double x) const { return 0.25 * (cp - cm) * smoothstep_dd(0.5 * (x + 1.0)); }

    double slope_at_zero_eps(double t) const { return t >= 0.0 ? cp : cm; }

    double value(double e, double t) const {
        if (e == 0.0) return std::abs(slope_at_zero_eps(t) * t);
        const double x = t / e;
        const double m = c(x) * t;
        return std::hypot(e, m);
    }
    // m′ = c + x·c′, m″ = (2c′ + x·c″)/ε
    double m_d(double e, double t) const {
        if (e == 0.0) return slope_at_zero_eps(t) * (t >= 0.0 ? 1.0 : -1.0);
        const double x = t / e;
        return c(x) + x * c_d(x);
    }
    double m_dd(double e, double t) const {
        if (e == 0.0) return 0.0;
        const double x = t / e;
        return (2.0 * c_d(x) + x * c_dd(x)) / e;
    }
    double d_t(double e, double t) const {
        if (e == 0.0) return t >= 0.0 ? cp : -cm;
        const double x = t / e;
        const double m = c(x) * t;
        const double r = std::hypot(e, m);
        return m * m_d(e, t) / r;
    }
    double d_tt(double e, double t) const {
        if (e == 0.0) return 0.0;
        const double m = c(t / e) * t;
        const double md = m_d(e, t);
        const double mdd = m_dd(e, t);
        const double r = std::hypot(e, m);
        const double rd = m * md / r;
        return (md * md + m * mdd) / r - m * md * rd / (r * r);
    }
};

} // namespace

ProfileRho make_profile(ProfileKind kind, const std::vector<double>& params) {
    switch (kind) {
        case ProfileKind::hyperbolic: {
            if (!params.empty())
                throw validation_error("hyperbolic profile takes no parameters");
            ProfileRho p;
            p.kind = kind;
            p.value = [](double e, double t) { return std::hypot(e, t); };
            p.d_t = [](double e, double t) { return t / std::hypot(e, t); };
            p.d_tt = [](double e, double t) {
                const double r = std::hypot(e, t);
                return e * e / (r * r * r);
            };
            return p;
        }
        case ProfileKind::linear_pair: {
            if (params.size() != 2)
                throw validation_error("linear-pair profile needs slopes c_minus, c_plus");
            if (!(params[0] > 0.0) || !(params[1] > 0.0))
                throw validation_error("linear-pair slopes must be positive");
            LinearPair lp{params[0], params[1]};
            ProfileRho p;
            p.kind = kind;
            p.params = params;
            p.value = [lp](double e, double t) { return lp.value(e, t); };
            p.d_t = [lp](double e, double t) { return lp.d_t(e, t); };
            p.d_tt = [lp](double e, double t) { return lp.d_tt(e, t); };
            return p;
        }
        case ProfileKind::custom_analytic: {
            if (params.size() != 1 || !(params[0] > 0.0))
                throw validation_error("custom-analytic profile needs a positive scale");
            return scaled_hyperbolic(params[0]);
        }
    }
    throw validation_error("unknown profile kind");
}

ProfileKind profile_kind_from_string(const std::string& name) {
    if (name == "hyperbolic") return ProfileKind::hyperbolic;
    if (name == "linear-pair") return ProfileKind::linear_pair;
    if (name == "custom-analytic") return ProfileKind::custom_analytic;
    throw validation_error("unknown profile kind '" + name + "'");
}

std::string to_string(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::hyperbolic: return "hyperbolic";
        case ProfileKind::linear_pair: return "linear-pair";
        case ProfileKind::custom_analytic: return "custom-analytic";
    }
    return "?";
}

ProfileRho mirror_profile(const ProfileRho& profile) {
    ProfileRho m = profile;
    auto v = profile.value;
    auto dt = profile.d_t;
    auto dtt = profile.d_tt;
    m.value = [v](double e, double t) { return v(e, -t); };
    m.d_t = [dt](double e, double t) { return -dt(e, -t); };
    m.d_tt = [dtt](double e, double t) { return dtt(e, -t); };
    return m;
}

HomogeneityConstants homogeneity_constants(const ProfileRho& profile) {
    const double cm = profile.value(0.0, -1.0);
    const double cp = profile.value(0.0, 1.0);
    if (!std::isfinite(cm) || !std::isfinite(cp) || cm <= 0.0 || cp <= 0.0)
        throw validation_error("profile is not positive at (0, ±1)");
    return {cm, cp};
}

FiberSpectrum FiberSpectrum::circle(double circumference) {
    if (!(circumference > 0.0))
        throw validation_error("circle fiber needs a positive circumference");
    FiberSpectrum f;
    f.source_ = FiberSource::circle;
    f.circumference_ = circumference;
    return f;
}

FiberSpectrum FiberSpectrum::flat_torus(std::vector<double> lengths) {
    if (lengths.empty() || lengths.size() > 6)
        throw validation_error("flat torus needs 1..6 lattice lengths");
    for (double L : lengths)
        if (!(L > 0.0)) throw validation_error("torus lengths must be positive");
    FiberSpectrum f;
    f.source_ = FiberSource::flat_torus;
    f.lengths_ = std::move(lengths);
    return f;
}

FiberSpectrum FiberSpectrum::explicit_list(std::vector<FiberMode> entries) {
    if (entries.empty() || entries.front().mu != 0.0 || entries.front().multiplicity != 1)
        throw validation_error("fiber spectrum must start with (0, 1)");
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].mu < entries[i - 1].mu)
            throw validation_error("fiber eigenvalues must be nondecreasing");
        if (entries[i].multiplicity < 1)
            throw validation_error("fiber multiplicities must be positive");
    }
    if (entries.size() > 1 && !(entries[1].mu > 0.0))
        throw validation_error("mu_1 must be positive");
    FiberSpectrum f;
    f.source_ = FiberSource::explicit_list;
    f.entries_ = std::move(entries);
    return f;
}

std::vector<FiberMode> FiberSpectrum::modes_up_to(double mu_max) const {
    std::vector<FiberMode> out;
    switch (source_) {
        case FiberSource::circle: {
            out.push_back({0.0, 1});
            const double base = 2.0 * M_PI / circumference_;
            for (int k = 1; base * base * k * k <= mu_max; ++k)
                out.push_back({base * base * k * k, 2});
            return out;
        }
        case FiberSource::flat_torus: {
            // enumerate lattice vectors m with Σ (2π m_i / L_i)² ≤ mu_max
            std::map<double, int> acc;
            const int dim = static_cast<int>(lengths_.size());
            std::vector<int> m(dim, 0);
            std::vector<int> bound(dim);
            for (int i = 0; i < dim; ++i)
                bound[i] = static_cast<int>(std::floor(std::sqrt(std::max(0.0, mu_max)) *
                                                       lengths_[i] / (2.0 * M_PI)));
            std::function<void(int, double)> rec = [&](int i, double partial) {
                if (i == dim) {
                    acc[partial] += 1;
                    return;
                }
                for (int k = -bound[i]; k <= bound[i]; ++k) {
                    const double term = 2.0 * M_PI * k / lengths_[i];
                    const double s = partial + term * term;
                    if (s <= mu_max) rec(i + 1, s);
                }
            };
            rec(0, 0.0);
            for (const auto& [mu, mult] : acc) out.push_back({mu, mult});
            // exact zero first even if rounding perturbed the map key
            if (!out.empty()) out.front().mu = 0.0;
            return out;
        }
        case FiberSource::explicit_list: {
            for (const auto& e : entries_)
                if (e.mu <= mu_max) out.push_back(e);
            return out;
        }
    }
    return out;
}

double FiberSpectrum::mu1() const {
    switch (source_) {
        case FiberSource::circle: {
            const double base = 2.0 * M_PI / circumference_;
            return base * base;
        }
        case FiberSource::flat_torus: {
            double best = std::numeric_limits<double>::infinity();
            for (double L : lengths_) {
                const double v = 2.0 * M_PI / L;
                best = std::min(best, v * v);
            }
            return best;
        }
        case FiberSource::explicit_list:
            if (entries_.size() < 2)
                throw validation_error("explicit fiber spectrum has no nonzero mode");
            return entries_[1].mu;
    }
    return 0.0;
}

int FiberSpectrum::intrinsic_dimension() const {
    switch (source_) {
        case FiberSource::circle: return 1;
        case FiberSource::flat_torus: return static_cast<int>(lengths_.size());
        case FiberSource::explicit_list: return 0;
    }
    return 0;
}

void CollarConfig::validate() const {
    if (!(a <= -1.0))
        throw validation_error("exponent a must satisfy a <= -1 (got " +
                               std::to_string(a) + ")");
    if (!(b > 0.0)) throw validation_error("exponent b must be positive");
    if (d < 1) throw validation_error("fiber dimension d must be >= 1");
    if (!(t_min < 0.0 && 0.0 < t_max))
        throw validation_error("collar interval must satisfy t_min < 0 < t_max");
    if (!profile.value) throw validation_error("profile evaluators are not set");
    const int fd = fiber.intrinsic_dimension();
    if (fd != 0 && fd != d)
        throw validation_error("fiber dimension does not match d");
    homogeneity_constants(profile); // positivity at (0, ±1)
}

SLProblem sl_coefficients(const CollarConfig& config, double eps, double mu) {
    return sl_coefficients(config, eps, mu, config.t_min, config.t_max);
}

SLProblem sl_coefficients(const CollarConfig& config, double eps, double mu,
                          double t0, double t1) {
    if (eps < 0.0) throw validation_error("eps must be nonnegative");
    if (!(t0 < t1)) throw validation_error("empty coefficient interval");
    if (eps == 0.0 && t0 <= 0.0 && 0.0 <= t1)
        throw validation_error(
            "eps = 0 with 0 inside the interval: singular coefficient");
    const double pe = -config.a + config.b * config.d;
    const double we = config.a + config.b * config.d;
    const double qe = we - 2.0 * config.b;
    auto rho = config.profile.value;
    SLProblem prob;
    prob.t0 = t0;
    prob.t1 = t1;
    prob.p = [rho, eps, pe](double t) { return std::pow(rho(eps, t), pe); };
    prob.w = [rho, eps, we](double t) { return std::pow(rho(eps, t), we); };
    if (mu == 0.0) {
        prob.q = [](double) { return 0.0; };
    } else {
        prob.q = [rho, eps, qe, mu](double t) {
            return mu * std::pow(rho(eps, t), qe);
        };
    }
    return prob;
}

double max_profile_on_interval(const ProfileRho& profile, double eps, double t0,
                               double t1) {
    const int coarse = 129;
    double best = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < coarse; ++i) {
        const double t = t0 + (t1 - t0) * i / (coarse - 1);
        const double v = profile.value(eps, t);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    // golden-section refinement on the bracketing subinterval
    const double h = (t1 - t0) / (coarse - 1);
    double lo = std::max(t0, t0 + (best_i - 1) * h);
    double hi = std::min(t1, t0 + (best_i + 1) * h);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = profile.value(eps, x1), f2 = profile.value(eps, x2);
    for (int it = 0; it < 80 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = profile.value(eps, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = profile.value(eps, x1);
        }
    }
    return std::max({best, f1, f2});
}

} // namespace collarspec
