#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "collarspec/errors.hpp"
#include "collarspec/metric_model.hpp"
#include "collarspec/sturm_liouville.hpp"
#include "collarspec/tridiag.hpp"

#include <cmath>
#include <random>

using namespace collarspec;

namespace {

SLProblem free_string(double length, BoundaryCondition bcl, BoundaryCondition bcr) {
    SLProblem p;
    p.t0 = 0.0;
    p.t1 = length;
    p.p = [](double) { return 1.0; };
    p.q = [](double) { return 0.0; };
    p.w = [](double) { return 1.0; };
    p.bc_left = bcl;
    p.bc_right = bcr;
    return p;
}

// random smooth strictly positive coefficients on [0,1]
SLProblem random_problem(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(-0.35, 0.35);
    std::uniform_real_distribution<double> qamp(-2.5, 2.5);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    const double a1 = amp(rng), a2 = amp(rng), f1 = phase(rng);
    const double b1 = amp(rng), b2 = amp(rng), f2 = phase(rng);
    const double c0 = qamp(rng), c1 = qamp(rng), f3 = phase(rng);
    SLProblem p;
    p.t0 = 0.0;
    p.t1 = 1.0;
    p.p = [=](double t) {
        return std::exp(a1 * std::sin(2.0 * M_PI * t + f1) + a2 * std::cos(4.0 * M_PI * t));
    };
    p.w = [=](double t) {
        return std::exp(b1 * std::sin(2.0 * M_PI * t + f2) + b2 * std::cos(2.0 * M_PI * t));
    };
    p.q = [=](double t) { return c0 + c1 * std::sin(4.0 * M_PI * t + f3); };
    return p;
}

} // namespace

TEST_CASE("counts for the free string on [0, pi]") {
    auto d = free_string(M_PI, BoundaryCondition::dirichlet,
                         BoundaryCondition::dirichlet);
    CHECK(count_eigenvalues(d, 4.5) == 2);  // 1, 4
    CHECK(count_eigenvalues(d, 0.5) == 0);
    CHECK(count_eigenvalues(d, 100.5) == 10);

    auto n = free_string(M_PI, BoundaryCondition::neumann,
                         BoundaryCondition::neumann);
    CHECK(count_eigenvalues(n, 4.5) == 3);  // 0, 1, 4
    CHECK(count_eigenvalues(n, -0.5) == 0);

    auto mixed = free_string(M_PI, BoundaryCondition::dirichlet,
                             BoundaryCondition::neumann);
    // eigenvalues (k + 1/2)^2, k >= 0
    CHECK(count_eigenvalues(mixed, 2.0) == 1);
    CHECK(count_eigenvalues(mixed, 2.3) == 2);
}

TEST_CASE("kth eigenvalue by bisection") {
    auto d = free_string(M_PI, BoundaryCondition::dirichlet,
                         BoundaryCondition::dirichlet);
    CHECK(kth_eigenvalue(d, 3, 1e-10) == doctest::Approx(9.0).epsilon(1e-9));
    CHECK(kth_eigenvalue(d, 1, 1e-10) == doctest::Approx(1.0).epsilon(1e-9));

    // constant potential shifts the free eigenvalues exactly
    const double L = 2.0;
    SLProblem c = free_string(L, BoundaryCondition::dirichlet,
                              BoundaryCondition::dirichlet);
    c.q = [](double) { return 0.25; };
    const double expected = 0.25 + M_PI * M_PI / (L * L);
    CHECK(kth_eigenvalue(c, 1, 1e-10) == doctest::Approx(expected).epsilon(1e-9));

    CHECK_THROWS_AS(kth_eigenvalue(d, 0, 1e-10), validation_error);
}

TEST_CASE("oscillation consistency: count jumps by one at each eigenvalue") {
    auto rngless = free_string(1.0, BoundaryCondition::dirichlet,
                               BoundaryCondition::dirichlet);
    rngless.q = [](double t) { return 3.0 * std::cos(2.0 * t); };
    int prev = -1;
    for (int k = 1; k <= 5; ++k) {
        const double lk = kth_eigenvalue(rngless, k, 1e-11);
        const int below = count_eigenvalues(rngless, lk - 1e-7);
        const int above = count_eigenvalues(rngless, lk + 1e-7);
        CHECK(below == k - 1);
        CHECK(above == k);
        CHECK(above > prev);
        prev = above;
    }
}

TEST_CASE("negative spectrum is bracketed correctly") {
    // deep constant well: eigenvalues (kπ)² − 30
    SLProblem wellp = free_string(M_PI, BoundaryCondition::dirichlet,
                                  BoundaryCondition::dirichlet);
    wellp.q = [](double) { return -30.0; };
    CHECK(kth_eigenvalue(wellp, 1, 1e-10) == doctest::Approx(-29.0).epsilon(1e-8));
    CHECK(kth_eigenvalue(wellp, 5, 1e-10) == doctest::Approx(-5.0).epsilon(1e-8));
    CHECK(count_eigenvalues(wellp, 0.0) == 5);
}

TEST_CASE("eigenfunction closed form on [0, pi]") {
    auto d = free_string(M_PI, BoundaryCondition::dirichlet,
                         BoundaryCondition::dirichlet);
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i) grid.push_back(M_PI * i / 400.0);
    auto sol = eigenfunction(d, 1.0, grid);
    const double amp = std::sqrt(2.0 / M_PI);
    for (int i = 0; i <= 400; i += 25) {
        CHECK(sol.u[i] == doctest::Approx(amp * std::sin(grid[i])).epsilon(1e-6));
        CHECK(sol.du[i] == doctest::Approx(amp * std::cos(grid[i])).epsilon(1e-5));
    }
    CHECK(sol.du.front() > 0.0); // sign convention

    // not an eigenvalue
    CHECK_THROWS_AS(eigenfunction(d, 1.37, grid), solver_error);
}

TEST_CASE("symmetric problem has an even ground state") {
    SLProblem p = free_string(2.0, BoundaryCondition::dirichlet,
                              BoundaryCondition::dirichlet);
    p.q = [](double t) { return 4.0 * (t - 1.0) * (t - 1.0); }; // even about t=1
    const double l1 = kth_eigenvalue(p, 1, 1e-11);
    std::vector<double> grid;
    for (int i = 0; i <= 320; ++i) grid.push_back(2.0 * i / 320.0);
    auto sol = eigenfunction(p, l1, grid);
    for (int i = 0; i <= 160; i += 10)
        CHECK(sol.u[i] == doctest::Approx(sol.u[320 - i]).epsilon(1e-6));
}

TEST_CASE("matrix oracle on the free string") {
    auto d = free_string(M_PI, BoundaryCondition::dirichlet,
                         BoundaryCondition::dirichlet);
    // three-point scheme: λ_k^disc = (4/h²)·sin²(k·h/2), so the error is
    // k⁴h²/12 to leading order; check against that curve
    const int n = 2000;
    const double h = M_PI / n;
    auto evs = matrix_oracle(d, n);
    for (int k = 1; k <= 5; ++k) {
        const double kk = static_cast<double>(k) * k;
        const double bound = 1.2 * kk * kk * h * h / 12.0 + 1e-9;
        CHECK(std::abs(evs[k - 1] - kk) < bound);
        const double dispersion = 4.0 / (h * h) * std::pow(std::sin(0.5 * k * h), 2);
        CHECK(evs[k - 1] == doctest::Approx(dispersion).epsilon(1e-9));
    }

    // potential shift moves the discrete spectrum exactly
    // the shift is exact at the matrix level; the comparison tolerance is
    // eigensolver roundoff, which scales with the largest matrix entry
    SLProblem shifted = d;
    shifted.q = [](double) { return 2.0; };
    auto evs2 = matrix_oracle(shifted, 2000);
    for (int i = 0; i < 10; ++i)
        CHECK(std::abs(evs2[i] - evs[i] - 2.0) < 1e-8);

    CHECK_THROWS_AS(matrix_oracle(d, 8), validation_error);
}

TEST_CASE("matrix oracle speaks Neumann") {
    auto n = free_string(M_PI, BoundaryCondition::neumann,
                         BoundaryCondition::neumann);
    auto evs = matrix_oracle(n, 2000);
    CHECK(std::abs(evs[0]) < 1e-9);
    CHECK(evs[1] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(evs[2] == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("matrix_oracle_kth agrees with the full list") {
    std::mt19937_64 rng(7);
    auto p = random_problem(rng);
    auto evs = matrix_oracle(p, 500);
    for (int k : {1, 2, 5, 9})
        CHECK(matrix_oracle_kth(p, 500, k) ==
              doctest::Approx(evs[k - 1]).epsilon(1e-10));
}

TEST_CASE("oracle equivalence on randomized smooth problems") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 10; ++trial) {
        SLProblem p = random_problem(rng);
        auto oracle = matrix_oracle(p, 4000);

        // first five eigenvalues within 1e-5 relative
        for (int k = 1; k <= 5; ++k) {
            const double prufer = kth_eigenvalue(p, k, 1e-10);
            const double scale = std::max(std::abs(oracle[k - 1]), 1.0);
            CHECK(std::abs(prufer - oracle[k - 1]) / scale < 1e-5);
        }

        // counts agree at thresholds midway between oracle eigenvalues
        for (int k : {1, 3, 6, 10}) {
            const double mid = 0.5 * (oracle[k - 1] + oracle[k]);
            int oracle_count = 0;
            for (double v : oracle)
                if (v <= mid) ++oracle_count;
            CHECK(count_eigenvalues(p, mid) == oracle_count);
        }
    }
}

TEST_CASE("eigenfunction matches the oracle eigenvector") {
    CollarConfig cfg;
    cfg.profile = make_profile(ProfileKind::hyperbolic);
    cfg.fiber = FiberSpectrum::circle(1.0);
    auto prob = sl_coefficients(cfg, 0.1, 0.0);

    const int n = 4000;
    const double l1 = kth_eigenvalue(prob, 1, 1e-11);
    auto fd = matrix_oracle_eigenfunction(prob, n, l1);
    CHECK(fd.lambda == doctest::Approx(l1).epsilon(1e-5));

    auto sol = eigenfunction(prob, l1, fd.t);
    // w-weighted L2 distance on the shared grid
    double dist2 = 0.0;
    const double h = fd.t[1] - fd.t[0];
    for (std::size_t i = 0; i < fd.t.size(); ++i) {
        const double diff = sol.u[i] - fd.u[i];
        dist2 += diff * diff * prob.w(fd.t[i]) * h;
    }
    CHECK(std::sqrt(dist2) < 1e-4);
}

TEST_CASE("hyperbolic constant mode count matches the oracle exactly") {
    CollarConfig cfg;
    cfg.profile = make_profile(ProfileKind::hyperbolic);
    cfg.fiber = FiberSpectrum::circle(1.0);
    auto prob = sl_coefficients(cfg, 0.1, 0.0);
    auto oracle = matrix_oracle(prob, 4000);
    int oracle_count = 0;
    for (double v : oracle)
        if (v <= 4.0) ++oracle_count;
    CHECK(count_eigenvalues(prob, 4.0) == oracle_count);
}

TEST_CASE("Dirichlet-Neumann interlacing") {
    std::mt19937_64 rng(99);
    SLProblem p = random_problem(rng);
    p.bc_left = p.bc_right = BoundaryCondition::dirichlet;
    SLProblem pn = p;
    pn.bc_left = pn.bc_right = BoundaryCondition::neumann;
    for (int k = 1; k <= 6; ++k) {
        const double ld = kth_eigenvalue(p, k, 1e-10);
        const double ln_k = kth_eigenvalue(pn, k, 1e-10);
        const double ln_k2 = kth_eigenvalue(pn, k + 2, 1e-10);
        CHECK(ln_k <= ld + 1e-8);
        CHECK(ld <= ln_k2 + 1e-8);
    }
}

TEST_CASE("Dirichlet domain monotonicity") {
    std::mt19937_64 rng(3);
    SLProblem small = random_problem(rng);
    SLProblem large = small;
    small.t0 = 0.1;
    small.t1 = 0.8;
    for (int k = 1; k <= 4; ++k)
        CHECK(kth_eigenvalue(large, k, 1e-10) <=
              kth_eigenvalue(small, k, 1e-10) + 1e-8);
}

TEST_CASE("potential shift moves eigenvalues exactly") {
    std::mt19937_64 rng(17);
    SLProblem p = random_problem(rng);
    const double c = 1.75;
    SLProblem q = p;
    auto base_q = p.q;
    auto base_w = p.w;
    q.q = [base_q, base_w, c](double t) { return base_q(t) + c * base_w(t); };
    for (int k : {1, 3, 5}) {
        const double lp = kth_eigenvalue(p, k, 1e-11);
        const double lq = kth_eigenvalue(q, k, 1e-11);
        CHECK(lq - lp == doctest::Approx(c).epsilon(1e-8));
    }
}

TEST_CASE("tridiagonal eigenvalue kernel") {
    // 2 on the diagonal, -1 off: eigenvalues 2 - 2cos(kπ/(n+1))
    const int n = 64;
    Tridiagonal m;
    m.diag.assign(n, 2.0);
    m.off.assign(n - 1, -1.0);
    auto evs = tridiag_eigenvalues(m);
    for (int k = 1; k <= n; ++k) {
        const double expect = 2.0 - 2.0 * std::cos(k * M_PI / (n + 1.0));
        CHECK(evs[k - 1] == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(tridiag_count_below(m, evs[9] + 1e-12) == 10);

    auto v = tridiag_eigenvector(m, evs[0]);
    // inverse iteration reproduces sin(πj/(n+1)) up to sign
    double dot = 0.0, nrm = 0.0;
    for (int j = 0; j < n; ++j) {
        const double ref = std::sin(M_PI * (j + 1) / (n + 1.0));
        dot += v[j] * ref;
        nrm += ref * ref;
    }
    for (int j = 0; j < n; ++j) {
        const double ref = std::sin(M_PI * (j + 1) / (n + 1.0)) * dot / nrm;
        CHECK(v[j] == doctest::Approx(ref).epsilon(1e-9));
    }
}
