#include "collarspec/spectrum_assembly.hpp"

#include "collarspec/errors.hpp"

#include <algorithm>
#include <cmath>

namespace collarspec {

int ModeIndexedSpectrum::total_count() const {
    int n = 0;
    for (const auto& ch : channels)
        n += ch.multiplicity * static_cast<int>(ch.values.size());
    return n;
}

double ModeIndexedSpectrum::kth(int i) const {
    if (i < 1) throw validation_error("spectrum index must be >= 1");
    int seen = 0;
    for (const auto& e : merged) {
        seen += e.multiplicity;
        if (seen >= i) return e.lambda;
    }
    throw validation_error("spectrum index exceeds the computed count");
}

namespace {

ModeIndexedSpectrum assemble(const CollarConfig& config, double eps,
                             double lambda_max, BoundaryCondition bc,
                             const SolveOptions& opt, bool include_constant_mode) {
    config.validate();
    if (!(eps > 0.0))
        throw validation_error("collar spectrum requires eps > 0 (cusp problems handle eps = 0)");
    if (!(lambda_max > 0.0)) throw validation_error("Lambda must be positive");

    ModeIndexedSpectrum out;
    out.bc = bc;
    out.lambda_max = lambda_max;
    out.rho_max = max_profile_on_interval(config.profile, eps, config.t_min,
                                          config.t_max);
    // channel is possibly nonempty only if μ ≤ Λ·(max ρ)^{2b}
    out.mu_cutoff = lambda_max * std::pow(out.rho_max, 2.0 * config.b);
    auto all_modes = config.fiber.modes_up_to(out.mu_cutoff);
    std::vector<FiberMode> modes;
    std::vector<int> mode_indices;
    for (std::size_t k = 0; k < all_modes.size(); ++k) {
        if (!include_constant_mode && k == 0) continue;
        modes.push_back(all_modes[k]);
        mode_indices.push_back(static_cast<int>(k));
    }

    out.channels.resize(modes.size());
    par::for_index(
        modes.size(),
        [&](std::size_t j) {
            ChannelSpectrum ch;
            ch.mode_index = mode_indices[j];
            ch.mu = modes[j].mu;
            ch.multiplicity = modes[j].multiplicity;
            SLProblem prob = sl_coefficients(config, eps, ch.mu);
            prob.bc_left = prob.bc_right = bc;
            int count;
            try {
                count = count_eigenvalues(prob, lambda_max, opt.prufer);
                if (opt.max_per_channel > 0)
                    count = std::min(count, opt.max_per_channel);
                for (int i = 1; i <= count; ++i)
                    ch.values.push_back(
                        kth_eigenvalue(prob, i, opt.bisect_tol, opt.prufer));
            } catch (const solver_error& err) {
                throw solver_error("channel mu=" + std::to_string(ch.mu) + ": " +
                                   err.what());
            }
            out.channels[j] = std::move(ch);
        },
        opt.policy);

    for (const auto& ch : out.channels)
        for (std::size_t i = 0; i < ch.values.size(); ++i)
            out.merged.push_back({ch.values[i], ch.mode_index, ch.mu,
                                  static_cast<int>(i) + 1, ch.multiplicity});
    std::sort(out.merged.begin(), out.merged.end(),
              [](const SpectrumEntry& x, const SpectrumEntry& y) {
                  if (x.lambda != y.lambda) return x.lambda < y.lambda;
                  if (x.mode_index != y.mode_index) return x.mode_index < y.mode_index;
                  return x.channel_index < y.channel_index;
              });
    return out;
}

} // namespace

ModeIndexedSpectrum collar_spectrum(const CollarConfig& config, double eps,
                                    double lambda_max, BoundaryCondition bc,
                                    const SolveOptions& opt) {
    return assemble(config, eps, lambda_max, bc, opt, true);
}

ModeIndexedSpectrum perp_spectrum(const CollarConfig& config, double eps,
                                  double lambda_max, BoundaryCondition bc,
                                  const SolveOptions& opt) {
    return assemble(config, eps, lambda_max, bc, opt, false);
}

std::vector<ChannelCount> collar_counts(const CollarConfig& config, double eps,
                                        double lambda_max, BoundaryCondition bc,
                                        const SolveOptions& opt) {
    config.validate();
    if (!(eps > 0.0)) throw validation_error("collar counts require eps > 0");
    const double rho_max = max_profile_on_interval(config.profile, eps,
                                                   config.t_min, config.t_max);
    const double mu_cutoff = lambda_max * std::pow(rho_max, 2.0 * config.b);
    auto modes = config.fiber.modes_up_to(mu_cutoff);
    std::vector<ChannelCount> out(modes.size());
    par::for_index(
        modes.size(),
        [&](std::size_t k) {
            SLProblem prob = sl_coefficients(config, eps, modes[k].mu);
            prob.bc_left = prob.bc_right = bc;
            out[k] = {static_cast<int>(k), modes[k].mu, modes[k].multiplicity,
                      count_eigenvalues(prob, lambda_max, opt.prufer)};
        },
        opt.policy);
    return out;
}

int total_count(const std::vector<ChannelCount>& counts) {
    int n = 0;
    for (const auto& c : counts) n += c.multiplicity * c.count;
    return n;
}

std::string to_string(SpectralRegime regime) {
    return regime == SpectralRegime::marginally_complete ? "marginally-complete"
                                                         : "overcomplete";
}

EssentialSpectrum essential_spectrum_bottom(const CollarConfig& config) {
    if (!(config.a <= -1.0))
        throw validation_error("essential spectrum classification needs a <= -1");
    if (config.a < -1.0) return {SpectralRegime::overcomplete, 0.0};
    const auto c = homogeneity_constants(config.profile);
    const double bd = config.b * config.d;
    const double side_minus = 0.25 * c.c_minus * c.c_minus * bd * bd;
    const double side_plus = 0.25 * c.c_plus * c.c_plus * bd * bd;
    return {SpectralRegime::marginally_complete, std::min(side_minus, side_plus)};
}

} // namespace collarspec
