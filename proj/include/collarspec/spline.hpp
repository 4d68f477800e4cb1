#pragma once

#include <vector>

namespace collarspec {

// Natural cubic spline through (x_i, y_i), x strictly increasing.
// Evaluation clamps to the end intervals.
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;

    bool empty() const { return x_.empty(); }

  private:
    std::vector<double> x_, y_, y2_; // y2_: second derivatives at knots
};

} // namespace collarspec
