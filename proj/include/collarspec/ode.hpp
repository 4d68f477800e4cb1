#pragma once

#include "collarspec/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>

namespace collarspec {

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    // upper bound on the step as a fraction of the整 interval; keeps the
    // controller from hopping over narrow features
    double max_step_fraction = 1.0 / 16.0;
};

// Dormand–Prince 5(4) with PI step-size control.  State dimension is a
// compile-time constant; the RHS signature is f(t, y, dydt).
template <std::size_t N, typename Rhs>
std::array<double, N> integrate_ode(Rhs&& f, std::array<double, N> y,
                                    double t0, double t1,
                                    const OdeOptions& opt = {}) {
    using State = std::array<double, N>;
    if (t0 == t1) return y;
    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    const double hmax = span * opt.max_step_fraction;
    const double hmin = span * 1e-15;

    State k1, k2, k3, k4, k5, k6, k7, ytmp, y5;
    double t = t0;
    f(t, y, k1);
    double h = std::min(hmax, span / 100.0);

    auto axpy = [](State& out, const State& y0, double hh,
                   std::initializer_list<std::pair<double, const State*>> terms) {
        for (std::size_t i = 0; i < N; ++i) {
            double acc = 0.0;
            for (const auto& [c, k] : terms) acc += c * (*k)[i];
            out[i] = y0[i] + hh * acc;
        }
    };

    long steps = 0;
    while (dir * (t1 - t) > 0.0) {
        if (++steps > 100000000L)
            throw solver_error("integrate_ode: step budget exhausted at t=" +
                               std::to_string(t));
        h = std::min(h, std::abs(t1 - t));
        const double hs = dir * h;

        axpy(ytmp, y, hs, {{1.0 / 5.0, &k1}});
        f(t + hs / 5.0, ytmp, k2);
        axpy(ytmp, y, hs, {{3.0 / 40.0, &k1}, {9.0 / 40.0, &k2}});
        f(t + 3.0 * hs / 10.0, ytmp, k3);
        axpy(ytmp, y, hs,
             {{44.0 / 45.0, &k1}, {-56.0 / 15.0, &k2}, {32.0 / 9.0, &k3}});
        f(t + 4.0 * hs / 5.0, ytmp, k4);
        axpy(ytmp, y, hs,
             {{19372.0 / 6561.0, &k1},
              {-25360.0 / 2187.0, &k2},
              {64448.0 / 6561.0, &k3},
              {-212.0 / 729.0, &k4}});
        f(t + 8.0 * hs / 9.0, ytmp, k5);
        axpy(ytmp, y, hs,
             {{9017.0 / 3168.0, &k1},
              {-355.0 / 33.0, &k2},
              {46732.0 / 5247.0, &k3},
              {49.0 / 176.0, &k4},
              {-5103.0 / 18656.0, &k5}});
        f(t + hs, ytmp, k6);
        axpy(y5, y, hs,
             {{35.0 / 384.0, &k1},
              {500.0 / 1113.0, &k3},
              {125.0 / 192.0, &k4},
              {-2187.0 / 6784.0, &k5},
              {11.0 / 84.0, &k6}});
        f(t + hs, y5, k7);

        // embedded 4th-order error estimate
        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = hs * (71.0 / 57600.0 * k1[i] -
                                   71.0 / 16695.0 * k3[i] +
                                   71.0 / 1920.0 * k4[i] -
                                   17253.0 / 339200.0 * k5[i] +
                                   22.0 / 525.0 * k6[i] - 1.0 / 40.0 * k7[i]);
            const double sc = opt.abs_tol +
                              opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(e) / sc);
        }

        if (err <= 1.0) {
            t += hs;
            y = y5;
            k1 = k7; // FSAL
            h = std::min(hmax, h * std::clamp(0.9 * std::pow(err > 0 ? err : 1e-10, -0.2), 0.5, 5.0));
        } else {
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9);
            if (h < hmin)
                throw solver_error("integrate_ode: step underflow at t=" +
                                   std::to_string(t));
        }
    }
    return y;
}

} // namespace collarspec
