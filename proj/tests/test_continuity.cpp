#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "collarspec/continuity_tracker.hpp"
#include "collarspec/errors.hpp"
#include "collarspec/metric_model.hpp"
#include "collarspec/spectrum_assembly.hpp"

#include <cmath>

using namespace collarspec;

namespace {

CollarConfig hyperbolic_config() {
    CollarConfig cfg;
    cfg.profile = make_profile(ProfileKind::hyperbolic);
    cfg.fiber = FiberSpectrum::circle(1.0);
    return cfg;
}

// profile frozen at eps = 1: no actual eps-dependence
CollarConfig frozen_config() {
    CollarConfig cfg;
    ProfileRho frozen;
    frozen.kind = ProfileKind::custom_analytic;
    frozen.value = [](double, double t) { return std::hypot(1.0, t); };
    frozen.d_t = [](double, double t) { return t / std::hypot(1.0, t); };
    frozen.d_tt = [](double, double t) {
        const double r = std::hypot(1.0, t);
        return 1.0 / (r * r * r);
    };
    cfg.profile = frozen;
    cfg.fiber = FiberSpectrum::circle(1.0);
    return cfg;
}

} // namespace

TEST_CASE("frozen coefficient family gives an exactly constant branch") {
    CollarConfig cfg = frozen_config();
    BranchOptions opt;
    // reference value at eps = 1 (the family ignores eps)
    auto spec = perp_spectrum(cfg, 1.0, 200.0, BoundaryCondition::dirichlet);
    REQUIRE(spec.total_count() >= 1);
    const double ref = spec.kth(1);

    auto branch = branch_track(cfg, 1, {1e-1, 1e-2, 1e-3}, opt, ref);
    for (double l : branch.lambda)
        CHECK(l == doctest::Approx(ref).epsilon(1e-8));
    for (double g : branch.gaps) CHECK(g < 1e-6);
}

TEST_CASE("branch respects the minimax lower bound") {
    CollarConfig cfg = hyperbolic_config();
    BranchOptions opt;
    opt.solve.bisect_tol = 1e-7;
    const std::vector<double> eps_grid = {1e-1, 3e-2, 1e-2};
    auto branch = branch_track(cfg, 1, eps_grid, opt, 0.0);
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        const double rho_max = max_profile_on_interval(cfg.profile, eps_grid[i],
                                                       cfg.t_min, cfg.t_max);
        const double bound = cfg.fiber.mu1() * std::pow(rho_max, -2.0);
        CHECK(branch.lambda[i] >= bound - 1e-6);
    }
    // eigenvalues move toward the cusp limit monotonically on this grid
    CHECK(branch.lambda[0] < branch.lambda[2]);
}

TEST_CASE("cusp limit matches a directly solved small-eps ladder") {
    CollarConfig cfg = hyperbolic_config();
    BranchOptions opt;
    opt.solve.bisect_tol = 1e-7;
    const double limit = perp_limit_kth(cfg, 1, opt);
    auto spec = perp_spectrum(cfg, 1e-4, 1.5 * limit + 10.0,
                              BoundaryCondition::dirichlet, opt.solve);
    REQUIRE(spec.total_count() >= 1);
    CHECK(std::abs(spec.kth(1) - limit) < 1e-2);
}

TEST_CASE("eigenfunction convergence report") {
    SUBCASE("frozen family: distances at solver noise") {
        CollarConfig cfg = frozen_config();
        ConvergenceOptions opt;
        opt.fd_points = 2001;
        // the eps = 0 reference of the frozen family is the family itself,
        // so compare successive eps values against each other instead: the
        // report's distances to the cusp reference are not meaningful here;
        // use the hyperbolic case for that. Here we only check the report
        // machinery runs and H1 >= L2.
        auto rep = eigenfunction_convergence(cfg, 1, {3e-1, 2e-1, 1e-1}, 0.3,
                                             0.9, opt);
        REQUIRE(rep.l2_dist.size() == 3);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(rep.h1_dist[i] >= rep.l2_dist[i] - 1e-12);
    }

    SUBCASE("hyperbolic: window distances shrink with eps") {
        CollarConfig cfg = hyperbolic_config();
        ConvergenceOptions opt;
        opt.fd_points = 4001;
        auto rep = eigenfunction_convergence(cfg, 1, {3e-2, 1e-2, 3e-3}, 0.3,
                                             0.9, opt);
        REQUIRE(rep.l2_dist.size() == 3);
        CHECK(rep.distances_decreasing);
        CHECK(rep.l2_dist[2] < rep.l2_dist[0]);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(rep.h1_dist[i] >= rep.l2_dist[i] - 1e-12);
            CHECK(rep.l2_dist[i] >= 0.0);
        }
        // normalized distances are scale-free: both functions carry unit
        // window norm, so distances cannot exceed 2
        for (double v : rep.l2_dist) CHECK(v <= 2.0);
    }

    SUBCASE("window validation") {
        CollarConfig cfg = hyperbolic_config();
        CHECK_THROWS_AS(
            eigenfunction_convergence(cfg, 1, {1e-1, 1e-2}, -0.1, 0.9, {}),
            validation_error);
        CHECK_THROWS_AS(
            eigenfunction_convergence(cfg, 1, {1e-1, 1e-2}, 0.9, 0.3, {}),
            validation_error);
    }
}

TEST_CASE("oscillation and matrix eigenvalues agree for a mu-channel") {
    // Prüfer bisection in t against finite differences in the transform
    // variable on the same channel
    CollarConfig cfg = hyperbolic_config();
    const double eps = 0.1;
    const double mu = cfg.fiber.mu1();
    auto radial = sl_coefficients(cfg, eps, mu);
    const double prufer = kth_eigenvalue(radial, 1, 1e-10);

    TransformData td(cfg, eps, cfg.t_min, cfg.t_max);
    auto schro = td.schroedinger_problem(mu, BoundaryCondition::dirichlet,
                                         BoundaryCondition::dirichlet, 6001);
    const double fd = matrix_oracle_kth(schro, 6000, 1);
    CHECK(std::abs(prufer - fd) / prufer < 1e-4);
}
