#pragma once

#include "collarspec/metric_model.hpp"
#include "collarspec/spectrum_assembly.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace collarspec {

// Flat, line-oriented `key = value` configuration with [section] headers.
// Unknown keys are rejected; every module precondition is checked when the
// derived objects are built.
struct ExperimentConfig {
    // [profile]
    std::string profile_kind = "hyperbolic";
    std::vector<double> profile_params;

    // [collar]
    double a = -1.0;
    double b = 1.0;
    int d = 1;
    double t_min = -1.0;
    double t_max = 1.0;

    // [fiber]
    std::string fiber_source = "circle";
    double circumference = 1.0;
    std::vector<double> torus_lengths;
    std::string fiber_entries; // "mu:mult,mu:mult,…" for explicit lists

    // [run]
    std::vector<double> epsilons = {1e-2,  3.1622776601683794e-3,
                                    1e-3,  3.1622776601683794e-4,
                                    1e-4,  3.1622776601683795e-5,
                                    1e-5};
    double lambda_max = 4.0;
    std::string bc = "dirichlet";
    std::uint64_t seed = 0;
    int threads = 0;

    // [solver]
    double prufer_rtol = 1e-10;
    double prufer_atol = 1e-12;
    double bisect_tol = 1e-9;
    int oracle_n = 4000;

    // [spectrum]
    double spectrum_eps = 0.1;

    // [branch]
    std::vector<double> branch_indices = {1, 2, 3};
    std::vector<double> branch_t_cuts = {1e-2, 1e-3, 1e-4};

    // [cusp]
    std::string cusp_side = "plus";
    int cusp_mode_index = 1;
    std::vector<double> cusp_t_cuts = {1e-2, 1e-3, 1e-4};
    std::string cusp_outer_bc = "dirichlet";
    std::string cusp_cut_bc = "dirichlet";
    std::vector<double> decay_orders = {1, 2, 4};

    // [converge]
    double window_lo = 0.3;
    double window_hi = 0.9;
    int converge_branch = 1;
    int fd_points = 6001;
    double limit_t_cut = 1e-5;

    // [transform]
    double transform_eps = 0.0;
    int transform_samples = 201;

    // [oscillation]
    std::string oscillation_kind = "lorentzian";
    double oscillation_amplitude = 1.0;
    double oscillation_m = 10.0;
    std::vector<double> oscillation_a_grid = {1, 2, 5, 10, 20, 50, 100, 200};

    static ExperimentConfig load(const std::filesystem::path& file,
                                 const std::vector<std::string>& overrides = {});

    // `section.key=value`; rejects unknown keys.
    void set(const std::string& key, const std::string& value);

    // Sorted `section.key = value` serialization; re-parsing reproduces the
    // config, and its hash identifies a run.
    std::string canonical() const;
    std::uint64_t hash() const;

    CollarConfig collar() const;
    SolveOptions solve_options() const;
    BoundaryCondition boundary() const;
};

} // namespace collarspec
