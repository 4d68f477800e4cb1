#pragma once

#include <functional>

namespace collarspec {

struct QuadOptions {
    double rel_tol = 1e-13;
    double abs_tol = 1e-15;
    int max_depth = 48;
};

// Adaptive Gauss–Kronrod 15(7) on [a, b].  Handles a > b with the usual
// sign convention.  Throws solver_error if the subdivision budget runs out
// before the error estimate meets the tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadOptions& opt = {});

} // namespace collarspec
