#pragma once

#include <span>

namespace mimocap {

/// Upper incomplete gamma Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt, x > 0.
/// Any real a; the nonpositive-a values needed by the capacity formulas are
/// reached by downward recurrence with a cancellation monitor and a
/// quadrature fallback.
double upper_incomplete_gamma(double a, double x);

/// e^x * Gamma(a, x). Stays representable for large x where the plain value
/// underflows; this is the form the closed-form log-moment uses.
double upper_incomplete_gamma_scaled(double a, double x);

/// int_0^inf x^m e^(-mu x) ln(1+x) dx  =  m! e^mu sum_{i=0}^m Gamma(i-m, mu) / mu^(i+1).
double log_moment_integral(int m, double mu);

/// log of log_moment_integral (always positive), safe for large m / small mu.
double log_moment_integral_log(int m, double mu);

/// int_0^inf x^m e^(-mu x) dx = m! / mu^(m+1), and its log.
double power_moment_integral(int m, double mu);
double power_moment_integral_log(int m, double mu);

/// When enabled, log_moment_integral re-validates every closed-form value
/// against adaptive quadrature and throws std::logic_error on disagreement.
void set_specfun_diagnostics(bool enabled);
bool specfun_diagnostics_enabled();

struct SeriesResult {
    double value = 0.0;
    bool converged = false;
    int terms = 0;
};

/// Truncated scalar hypergeometric series pFq(a; b; z). Stops when the term
/// magnitude drops below tolerance * |partial sum| or at `truncation` terms;
/// a terminating series (nonpositive integer in a) is summed exactly.
/// Throws std::domain_error when p > q+1 and |z| >= 1 (divergent), or when a
/// nonpositive-integer b parameter is reached.
SeriesResult scalar_pFq(std::span<const double> a, std::span<const double> b, double z,
                        int truncation = 10000, double tolerance = 1e-15);

}  // namespace mimocap
