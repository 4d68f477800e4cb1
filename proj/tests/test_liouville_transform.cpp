#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "collarspec/errors.hpp"
#include "collarspec/liouville_transform.hpp"
#include "collarspec/metric_model.hpp"
#include "collarspec/quadrature.hpp"
#include "collarspec/sturm_liouville.hpp"

#include <cmath>
#include <random>

using namespace collarspec;

namespace {

CollarConfig hyperbolic_config() {
    CollarConfig cfg;
    cfg.profile = make_profile(ProfileKind::hyperbolic);
    cfg.fiber = FiberSpectrum::circle(1.0);
    return cfg;
}

} // namespace

TEST_CASE("alpha closed forms") {
    CollarConfig cfg = hyperbolic_config();

    SUBCASE("hyperbolic, a = -1: alpha = asinh(t/eps) from t0 = 0") {
        for (double eps : {0.5, 0.05})
            for (double t : {-1.0, -0.2, 0.3, 1.0})
                CHECK(alpha_integral(cfg, eps, t, 0.0) ==
                      doctest::Approx(std::asinh(t / eps)).epsilon(1e-10));
    }
    SUBCASE("eps = 0, c = 1: alpha = ln t from t0 = 1") {
        for (double t : {0.1, 0.5, 2.0})
            CHECK(alpha_integral(cfg, 0.0, t, 1.0) ==
                  doctest::Approx(std::log(t)).epsilon(1e-10));
    }
    SUBCASE("empty integral") {
        CHECK(alpha_integral(cfg, 0.3, 0.7, 0.7) == 0.0);
    }
    SUBCASE("singularity inside the range is rejected") {
        CHECK_THROWS_AS(alpha_integral(cfg, 0.0, 1.0, -1.0), validation_error);
    }
}

TEST_CASE("alpha map inverts itself") {
    CollarConfig cfg = hyperbolic_config();
    AlphaMap map(cfg, 0.05, -1.0, 1.0, 0.0);
    CHECK(map.s_of_t(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    for (double t : {-0.98, -0.4, -0.01, 0.002, 0.33, 0.77}) {
        const double s = map.s_of_t(t);
        CHECK(std::abs(map.t_of_s(s) - t) < 1e-9);
        CHECK(s == doctest::Approx(std::asinh(t / 0.05)).epsilon(1e-10));
    }
    // strictly increasing
    double prev = map.s_of_t(-1.0);
    for (int i = 1; i <= 40; ++i) {
        const double s = map.s_of_t(-1.0 + 2.0 * i / 40.0);
        CHECK(s > prev);
        prev = s;
    }
}

TEST_CASE("conjugated potential") {
    SUBCASE("a = -1, eps = 0: constant (c b d/2)^2 on each side") {
        CollarConfig lp = hyperbolic_config();
        lp.profile = make_profile(ProfileKind::linear_pair, {2.0, 3.0});
        lp.b = 0.7;
        lp.d = 2;
        const double bd = lp.b * lp.d;
        for (double t : {0.05, 0.3, 1.0}) {
            CHECK(conjugated_potential_at_t(lp, 0.0, t) ==
                  doctest::Approx(0.25 * 9.0 * bd * bd).epsilon(1e-12));
            CHECK(conjugated_potential_at_t(lp, 0.0, -t) ==
                  doctest::Approx(0.25 * 4.0 * bd * bd).epsilon(1e-12));
        }
    }

    SUBCASE("hyperbolic, eps > 0: closed form and the 1/4 limit") {
        CollarConfig cfg = hyperbolic_config();
        const double eps = 0.2;
        TransformData td(cfg, eps, -1.0, 1.0);
        for (double s : {-2.0, -0.5, 0.0, 1.0, 2.2}) {
            const double t = eps * std::sinh(s);
            const double r2 = eps * eps + t * t;
            const double expect = 0.5 * (eps * eps / r2 + 0.5 * t * t / r2);
            CHECK(td.potential(s) == doctest::Approx(expect).epsilon(1e-9));
        }
        TransformData far(cfg, 1e-3, -1.0, 1.0);
        CHECK(far.potential(far.s_hi() - 0.5) ==
              doctest::Approx(0.25).epsilon(1e-4));
    }

    SUBCASE("a < -1, eps = 0: inverse-square tail toward the cusp") {
        CollarConfig cfg = hyperbolic_config();
        cfg.a = -2.0;
        const double bd = cfg.b * cfg.d;
        const double k = 0.25 * bd * (bd - 2.0 * cfg.a - 2.0);

        // with ρ = ct the potential is exactly k·c²·(ct)^{−2a−2}
        for (double t : {1e-4, 1e-3, 0.3})
            CHECK(conjugated_potential_at_t(cfg, 0.0, t) ==
                  doctest::Approx(k * std::pow(t, -2.0 * cfg.a - 2.0))
                      .epsilon(1e-12));
        CollarConfig sc = cfg;
        sc.profile = make_profile(ProfileKind::custom_analytic, {2.0});
        for (double t : {1e-3, 0.2})
            CHECK(conjugated_potential_at_t(sc, 0.0, t) ==
                  doctest::Approx(k * 4.0 *
                                  std::pow(2.0 * t, -2.0 * sc.a - 2.0))
                      .epsilon(1e-12));

        // the transform variable diverges at the cusp like c^a t^{a+1}/(a+1),
        // so written in s the tail is k·((a+1)·s)^{−2} for c = 1
        const double t0 = 1e-2;
        for (double t : {1e-4, 1e-5}) {
            const double s_asym = std::pow(t, cfg.a + 1.0) / (cfg.a + 1.0);
            CHECK(alpha_integral(cfg, 0.0, t, t0) ==
                  doctest::Approx(s_asym).epsilon(2.0 * t / t0));
            CHECK(conjugated_potential_at_t(cfg, 0.0, t) ==
                  doctest::Approx(k / std::pow((cfg.a + 1.0) * s_asym, 2))
                      .epsilon(1e-12));
        }

        // TransformData end-to-end on a moderate truncation
        TransformData td(cfg, 0.0, 1e-3, 1.0);
        const double t_probe = 2e-3;
        const double s_probe = td.map().s_of_t(t_probe);
        CHECK(td.potential(s_probe) ==
              doctest::Approx(k * t_probe * t_probe).epsilon(1e-9));
    }
}

TEST_CASE("unitary pushforward") {
    CollarConfig cfg = hyperbolic_config();
    const double eps = 0.3;
    TransformData td(cfg, eps, -1.0, 1.0);

    SUBCASE("constant pulls back to rho^{-bd/2}") {
        std::vector<double> sg, f;
        for (int i = 0; i <= 32; ++i) {
            sg.push_back(td.s_lo() + (td.s_hi() - td.s_lo()) * i / 32.0);
            f.push_back(1.0);
        }
        auto pushed = td.unitary_push(sg, f);
        for (std::size_t i = 0; i < sg.size(); ++i) {
            const double rho = cfg.profile.value(eps, pushed.t[i]);
            CHECK(pushed.values[i] ==
                  doctest::Approx(std::pow(rho, -0.5)).epsilon(1e-10));
        }
    }

    SUBCASE("norm preservation for random band-limited functions") {
        std::mt19937_64 rng(424242);
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        const double slo = td.s_lo(), shi = td.s_hi();
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> a(8);
            for (auto& c : a) c = coef(rng);
            auto f = [&](double s) {
                double acc = 0.0;
                for (int k = 0; k < 8; ++k)
                    acc += a[k] * std::sin((k + 1) * M_PI * (s - slo) / (shi - slo));
                return acc;
            };
            const double norm_s = integrate(
                [&](double s) { return f(s) * f(s); }, slo, shi, {1e-12, 1e-14, 48});
            const double norm_t = integrate(
                [&](double t) {
                    const double s = td.map().s_of_t(t);
                    const double rho = cfg.profile.value(eps, t);
                    const double uf = std::pow(rho, -0.5) * f(s);
                    return uf * uf; // w = rho^{a+bd} = 1 for a=-1, b=d=1
                },
                -1.0, 1.0, {1e-12, 1e-14, 48});
            CHECK(std::abs(norm_t - norm_s) <= 1e-8 * norm_s);
        }
    }
}

TEST_CASE("conjugation preserves the Dirichlet spectrum") {
    CollarConfig cfg = hyperbolic_config();
    const double eps = 0.3;
    auto radial = sl_coefficients(cfg, eps, 0.0);

    TransformData td(cfg, eps, -1.0, 1.0);
    auto schro = td.schroedinger_problem(0.0, BoundaryCondition::dirichlet,
                                         BoundaryCondition::dirichlet);
    for (int k = 1; k <= 5; ++k) {
        const double a = kth_eigenvalue(radial, k, 1e-10);
        const double b = kth_eigenvalue(schro, k, 1e-10);
        CHECK(std::abs(a - b) / a < 1e-6);
    }
}

TEST_CASE("homogeneous limit of the potential") {
    // sup |V - 1/4| over a window in the far region shrinks as eps drops
    CollarConfig cfg = hyperbolic_config();
    double prev_sup = 1e9;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        TransformData td(cfg, eps, -1.0, 1.0);
        const double shi = td.s_hi();
        double sup = 0.0;
        for (int i = 0; i <= 64; ++i) {
            const double s = 0.6 * shi + 0.35 * shi * i / 64.0;
            sup = std::max(sup, std::abs(td.potential(s) - 0.25));
        }
        CHECK(sup < prev_sup);
        prev_sup = sup;
    }
    CHECK(prev_sup < 1e-3);
}
