#include "mimocap/specfun.hpp"

#include "mimocap/quadrature.hpp"
#include "mimocap/signed_log.hpp"
#include "specfun_hp.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mimocap {

namespace {

std::atomic<bool> g_diagnostics{false};

constexpr double kLogAmplificationLimit = 13.815510557964274;  // ln(1e6)

/// Legendre continued fraction for e^x Gamma(a, x); accurate once x is a
/// few units past max(a, 0).
double scaled_gamma_cf(double a, double x) {
    const double fpmin = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 300; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= 1e-16) break;
    }
    return std::pow(x, a) * h;
}

/// e^x * Gamma(0, x) = e^x * E1(x).
double scaled_e1(double x) {
    if (x < 10.0) return std::exp(x) * (-std::expint(-x));
    return scaled_gamma_cf(0.0, x);
}

/// e^x * Gamma(a, x) for a in (0, 1]; seed of the downward recurrence.
double scaled_seed_positive(double a, double x) {
    if (x <= 600.0) return std::exp(x) * boost::math::tgamma(a, x);
    return scaled_gamma_cf(a, x);
}

/// e^x * Gamma(a, x) by quadrature of the substituted integral
/// x^a * int_0^inf (1+v)^(a-1) e^(-x v) dv, whose integrand stays inside
/// double range even when the value itself does not.
SignedLogValue scaled_gamma_quadrature(double a, double x) {
    const auto f = [a, x](double v) { return std::exp((a - 1.0) * std::log1p(v) - x * v); };
    const QuadratureResult q = integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                                         1e-13, 15);
    return SignedLogValue::from_log(1, a * std::log(x) + std::log(q.value));
}

/// Gamma(a + k, x) * e^x for k = 0 corresponds to the requested order.
/// Returns the scaled values for orders a, a-1, ..., a-steps as produced by
/// the downward recurrence G(c-1) = (G(c) - x^(c-1)) / (c-1); entries whose
/// cumulative cancellation passed the monitor threshold are recomputed by
/// quadrature.
std::vector<SignedLogValue> scaled_gamma_chain(double a_top, int steps, double x) {
    std::vector<SignedLogValue> chain;
    chain.reserve(steps + 1);

    SignedLogValue g = (a_top == 0.0)
                           ? SignedLogValue::from_double(scaled_e1(x))
                           : SignedLogValue::from_double(scaled_seed_positive(a_top, x));
    chain.push_back(g);

    const double logx = std::log(x);
    double cum_log_amp = 0.0;
    bool fallback = false;
    for (int k = 1; k <= steps; ++k) {
        const double c = a_top - k;  // target order of this step
        if (!fallback) {
            const SignedLogValue term = SignedLogValue::from_log(1, c * logx);
            const SignedLogValue num = g - term;
            SignedLogValue next = num / SignedLogValue::from_double(c);
            const double peak = std::max(g.logmag, term.logmag);
            if (next.sign <= 0) {
                fallback = true;  // sign must stay positive; cancellation ate it
            } else {
                cum_log_amp += std::max(0.0, peak - num.logmag);
                if (cum_log_amp > kLogAmplificationLimit) fallback = true;
            }
            if (!fallback) {
                g = next;
                chain.push_back(g);
                continue;
            }
        }
        g = scaled_gamma_quadrature(c, x);
        chain.push_back(g);
    }
    return chain;
}

SignedLogValue scaled_gamma_slv(double a, double x) {
    if (!(x > 0.0))
        throw std::domain_error("upper incomplete gamma needs x > 0, got x = " +
                                std::to_string(x));
    if (a > 0.0) return SignedLogValue::from_double(scaled_seed_positive(a, x));
    if (a == 0.0) return SignedLogValue::from_double(scaled_e1(x));
    // a < 0: walk down from the fractional (or zero) head of the chain.
    const double frac = a - std::floor(a);
    const double a_top = (frac == 0.0) ? 0.0 : frac;
    const int steps = static_cast<int>(std::lround(a_top - a));
    return scaled_gamma_chain(a_top, steps, x).back();
}

}  // namespace

double upper_incomplete_gamma_scaled(double a, double x) {
    return scaled_gamma_slv(a, x).to_double();
}

double upper_incomplete_gamma(double a, double x) {
    SignedLogValue g = scaled_gamma_slv(a, x);
    return SignedLogValue::from_log(g.sign, g.logmag - x).to_double();
}

double power_moment_integral_log(int m, double mu) {
    if (m < 0) throw std::domain_error("moment order must be >= 0");
    if (!(mu > 0.0)) throw std::domain_error("rate mu must be positive");
    return std::lgamma(m + 1.0) - (m + 1.0) * std::log(mu);
}

double power_moment_integral(int m, double mu) {
    return std::exp(power_moment_integral_log(m, mu));
}

double log_moment_integral_log(int m, double mu) {
    if (m < 0) throw std::domain_error("moment order must be >= 0");
    if (!(mu > 0.0)) throw std::domain_error("rate mu must be positive");

    // m! e^mu sum_{i=0}^m Gamma(i-m, mu) / mu^(i+1); every addend is
    // positive, so the sum is a plain log-sum accumulation.
    const std::vector<SignedLogValue> chain = scaled_gamma_chain(0.0, m, mu);
    const double logmu = std::log(mu);
    SignedLogValue sum = SignedLogValue::zero();
    for (int i = 0; i <= m; ++i) {
        const SignedLogValue g = chain[static_cast<std::size_t>(m - i)];  // Gamma(i-m, mu) e^mu
        sum += SignedLogValue::from_log(g.sign, g.logmag - (i + 1.0) * logmu);
    }
    if (sum.sign <= 0)
        throw std::logic_error("log-moment sum lost positivity (m=" + std::to_string(m) +
                               ", mu=" + std::to_string(mu) + ")");
    const double result = std::lgamma(m + 1.0) + sum.logmag;

    if (g_diagnostics.load(std::memory_order_relaxed)) {
        const auto f = [m, mu](double t) {
            return std::exp(m * std::log(t) - mu * t) * std::log1p(t);
        };
        const auto fm0 = [mu](double t) { return std::exp(-mu * t) * std::log1p(t); };
        const QuadratureResult q =
            integrate(m == 0 ? std::function<double(double)>(fm0)
                             : std::function<double(double)>(f),
                      0.0, std::numeric_limits<double>::infinity(), 1e-12, 15);
        const double ref = std::log(q.value);
        if (std::abs(result - ref) > 1e-6 * std::max(1.0, std::abs(ref)))
            throw std::logic_error("log_moment_integral disagrees with quadrature: closed=" +
                                   std::to_string(result) + " quad=" + std::to_string(ref));
    }
    return result;
}

double log_moment_integral(int m, double mu) {
    return std::exp(log_moment_integral_log(m, mu));
}

void set_specfun_diagnostics(bool enabled) {
    g_diagnostics.store(enabled, std::memory_order_relaxed);
}

bool specfun_diagnostics_enabled() { return g_diagnostics.load(std::memory_order_relaxed); }

namespace detail {

mpfr_float hp_power_moment(int m, const mpfr_float& mu) {
    mpfr_float fact(1);
    for (int t = 2; t <= m; ++t) fact *= t;
    return fact / boost::multiprecision::pow(mu, m + 1);
}

mpfr_float hp_log_moment(int m, const mpfr_float& mu) {
    // chain of e^mu Gamma(-j, mu), j = 0..m, from the scaled E1 seed
    std::vector<mpfr_float> chain(m + 1);
    chain[0] = -boost::multiprecision::exp(mu) * boost::math::expint(mpfr_float(-mu));
    for (int j = 1; j <= m; ++j) {
        const mpfr_float c = mpfr_float(-j);  // target order
        chain[j] = (chain[j - 1] - boost::multiprecision::pow(mu, c)) / c;
    }
    mpfr_float sum(0);
    for (int j = 0; j <= m; ++j) {
        sum += chain[j] / boost::multiprecision::pow(mu, m - j + 1);
    }
    mpfr_float fact(1);
    for (int t = 2; t <= m; ++t) fact *= t;
    return fact * sum;
}

}  // namespace detail

SeriesResult scalar_pFq(std::span<const double> a, std::span<const double> b, double z,
                        int truncation, double tolerance) {
    if (truncation < 1) throw std::domain_error("truncation must be >= 1");
    bool terminating = false;  // a nonpositive-integer numerator makes it a polynomial
    for (double ai : a)
        if (ai <= 0.0 && ai == std::floor(ai)) terminating = true;
    if (!terminating && a.size() > b.size() + 1 && std::abs(z) >= 1.0)
        throw std::domain_error("pFq series diverges for p > q+1 and |z| >= 1");

    SeriesResult r;
    double term = 1.0;
    double sum = 1.0;
    r.terms = 1;
    if (z == 0.0) {
        r.value = 1.0;
        r.converged = true;
        return r;
    }
    for (int k = 0; k < truncation; ++k) {
        double num = 1.0;
        for (double ai : a) num *= ai + k;
        double den = 1.0;
        for (double bi : b) den *= bi + k;
        if (num == 0.0) {  // terminating series: exact polynomial
            r.value = sum;
            r.converged = true;
            return r;
        }
        if (den == 0.0)
            throw std::domain_error("pFq hit a nonpositive-integer denominator parameter at k=" +
                                    std::to_string(k));
        term *= num / den * z / (k + 1.0);
        sum += term;
        ++r.terms;
        if (std::abs(term) <= tolerance * std::abs(sum)) {
            r.value = sum;
            r.converged = true;
            return r;
        }
    }
    r.value = sum;
    r.converged = false;
    return r;
}

}  // namespace mimocap
