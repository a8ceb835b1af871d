#include "mimocap/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace mimocap {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, int max_depth) {
    using integrator = boost::math::quadrature::gauss_kronrod<double, 15>;
    double error = 0.0;
    double l1 = 0.0;
    const double value = integrator::integrate(f, a, b, max_depth, rel_tol, &error, &l1);
    QuadratureResult r;
    r.value = value;
    r.abs_error = error;
    const double scale = std::max(std::abs(value), 1e-300);
    r.converged = std::isfinite(value) && (error <= 100.0 * rel_tol * std::max(scale, l1));
    return r;
}

double integrate_checked(const std::function<double(double)>& f, double a, double b,
                         double rel_tol, int max_depth) {
    const QuadratureResult r = integrate(f, a, b, rel_tol, max_depth);
    if (!r.converged) {
        throw std::runtime_error("quadrature did not reach requested tolerance (value=" +
                                 std::to_string(r.value) +
                                 ", err=" + std::to_string(r.abs_error) + ")");
    }
    return r.value;
}

}  // namespace mimocap
