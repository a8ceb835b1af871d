#pragma once

#include <functional>

namespace mimocap {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;  // estimate reported by the integrator
    bool converged = false;
};

/// Adaptive Gauss-Kronrod integration of f over [a, b]; b may be +infinity.
/// max_depth bounds the interval-splitting recursion.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-12, int max_depth = 15);

/// Convenience: value only, throws std::runtime_error when the error
/// estimate is far off the requested tolerance.
double integrate_checked(const std::function<double(double)>& f, double a, double b,
                         double rel_tol = 1e-12, int max_depth = 15);

}  // namespace mimocap
