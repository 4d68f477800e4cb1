// Serial-vs-OpenMP timing for the two sweep kernels: collar count sweeps
// (one Prüfer integration per ε per channel) and batched matrix oracles.

#include "collarspec/asymptotics.hpp"
#include "collarspec/metric_model.hpp"
#include "collarspec/parallel.hpp"
#include "collarspec/sturm_liouville.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

using namespace collarspec;

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return seconds(t0, std::chrono::steady_clock::now());
}

CollarConfig hyperbolic_benchmark() {
    CollarConfig cfg;
    cfg.profile = make_profile(ProfileKind::hyperbolic);
    cfg.fiber = FiberSpectrum::circle(1.0);
    return cfg;
}

} // namespace

int main() {
    const CollarConfig cfg = hyperbolic_benchmark();
    const std::vector<double> eps_grid = {1e-2, 3.162e-3, 1e-3, 3.162e-4,
                                          1e-4, 3.162e-5, 1e-5};

    std::printf("%-34s %10s %10s %8s\n", "kernel", "serial[s]", "openmp[s]",
                "speedup");

    {
        SolveOptions opt;
        opt.policy = par::Policy::serial;
        const double ts = timed([&] { count_sweep(cfg, 4.0, eps_grid, opt); });
        opt.policy = par::Policy::openmp;
        const double tp = timed([&] { count_sweep(cfg, 4.0, eps_grid, opt); });
        std::printf("%-34s %10.3f %10.3f %8.2f\n", "count sweep (7 eps, Lambda=4)",
                    ts, tp, ts / tp);
    }

    {
        // batch of oracle solves on the mu = 0 channel at several eps
        std::vector<double> eps_batch;
        for (int i = 0; i < 24; ++i) eps_batch.push_back(0.05 + 0.01 * i);
        auto run = [&](par::Policy policy) {
            std::vector<double> out(eps_batch.size());
            par::for_index(
                eps_batch.size(),
                [&](std::size_t i) {
                    SLProblem prob = sl_coefficients(cfg, eps_batch[i], 0.0);
                    out[i] = matrix_oracle(prob, 1200)[0];
                },
                policy);
            return out;
        };
        const double ts = timed([&] { run(par::Policy::serial); });
        const double tp = timed([&] { run(par::Policy::openmp); });
        // identical results regardless of policy
        const auto a = run(par::Policy::serial);
        const auto b = run(par::Policy::openmp);
        bool same = true;
        for (std::size_t i = 0; i < a.size(); ++i) same = same && a[i] == b[i];
        std::printf("%-34s %10.3f %10.3f %8.2f   (identical: %s)\n",
                    "matrix oracle batch (24 x n=1200)", ts, tp, ts / tp,
                    same ? "yes" : "NO");
    }
    return 0;
}
