#include <doctest.h>

#include <initializer_list>

#include <mimocap/quadrature.hpp>
#include <mimocap/specfun.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace mimocap;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

// Independent oracle: direct quadrature of int_x^inf t^(a-1) e^-t dt.
double gamma_quad(double a, double x) {
    return integrate([a](double t) { return std::pow(t, a - 1.0) * std::exp(-t); }, x, kInf,
                     1e-13, 15)
        .value;
}

// Independent oracle for the log moment.
double log_moment_quad(int m, double mu) {
    return integrate(
               [m, mu](double x) {
                   return (m == 0 ? 1.0 : std::pow(x, m)) * std::exp(-mu * x) * std::log1p(x);
               },
               0.0, kInf, 1e-13, 15)
        .value;
}
}  // namespace

TEST_SUITE("specfun") {

TEST_CASE("upper incomplete gamma pinned values") {
    CHECK(upper_incomplete_gamma(1.0, 2.0) ==
          doctest::Approx(0.1353352832366127).epsilon(1e-13));  // e^-2
    CHECK(upper_incomplete_gamma(0.0, 1.0) ==
          doctest::Approx(0.2193839343955203).epsilon(1e-12));  // E1(1)
    CHECK(upper_incomplete_gamma(-2.0, 0.5) ==
          doctest::Approx(0.8864174571007138).epsilon(1e-10));
    CHECK(upper_incomplete_gamma(-2.0, 0.5) ==
          doctest::Approx(gamma_quad(-2.0, 0.5)).epsilon(1e-10));
}

TEST_CASE("gamma recurrence vs quadrature over the contract grid") {
    for (int a = -10; a <= 1; ++a) {
        for (double x : {0.01, 0.1, 1.0, 10.0}) {
            const double got = upper_incomplete_gamma(a, x);
            const double want = gamma_quad(a, x);
            CHECK(got == doctest::Approx(want).epsilon(1e-8));
        }
    }
    // non-integer orders ride the same recurrence from a fractional seed
    for (double a : {-0.5, -3.25, -7.75}) {
        for (double x : {0.05, 0.8, 5.0}) {
            CHECK(upper_incomplete_gamma(a, x) ==
                  doctest::Approx(gamma_quad(a, x)).epsilon(1e-9));
        }
    }
}

TEST_CASE("gamma domain errors") {
    CHECK_THROWS_AS(upper_incomplete_gamma(-1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(upper_incomplete_gamma(0.5, -1.0), std::domain_error);
}

TEST_CASE("scaled gamma survives large x") {
    // e^x Gamma(a, x) ~ x^(a-1) for large x; plain value underflows
    const double g = upper_incomplete_gamma_scaled(-1.0, 2000.0);
    CHECK(g == doctest::Approx(std::pow(2000.0, -2.0)).epsilon(1e-2));
    CHECK(upper_incomplete_gamma(-1.0, 2000.0) == 0.0);  // honest underflow
}

TEST_CASE("power moment closed form") {
    CHECK(power_moment_integral(0, 1.0) == doctest::Approx(1.0));
    CHECK(power_moment_integral(2, 1.0) == doctest::Approx(2.0));
    CHECK(power_moment_integral(3, 0.5) == doctest::Approx(96.0));
    CHECK_THROWS_AS(power_moment_integral(1, 0.0), std::domain_error);
    CHECK_THROWS_AS(power_moment_integral(-1, 1.0), std::domain_error);
}

TEST_CASE("log moment pinned values and quadrature agreement") {
    CHECK(log_moment_integral(0, 1.0) ==
          doctest::Approx(0.5963473623231941).epsilon(1e-12));  // e * E1(1)
    CHECK(log_moment_integral(1, 2.0) ==
          doctest::Approx(0.1596678457779444).epsilon(1e-12));
    CHECK(log_moment_integral(3, 0.7) ==
          doctest::Approx(45.36896528374261).epsilon(1e-12));
    CHECK(log_moment_integral(1, 2.0) ==
          doctest::Approx(log_moment_quad(1, 2.0)).epsilon(1e-9));
    // large-mu leading order 1/mu^2
    const double mu = 1e3;
    CHECK(log_moment_integral(0, mu) == doctest::Approx(log_moment_quad(0, mu)).epsilon(1e-9));
    CHECK(log_moment_integral(0, mu) == doctest::Approx(1.0 / (mu * mu)).epsilon(5e-3));
}

TEST_CASE("log moment contract grid vs quadrature") {
    for (int m = 0; m <= 10; ++m) {
        for (double mu : {0.05, 0.5, 2.0, 10.0, 50.0}) {
            CHECK(log_moment_integral(m, mu) ==
                  doctest::Approx(log_moment_quad(m, mu)).epsilon(1e-9));
        }
    }
}

TEST_CASE("log moment monotonicity") {
    // strictly decreasing in mu, strictly increasing in m
    double prev = kInf;
    for (double mu : {0.1, 0.3, 1.0, 3.0, 10.0}) {
        const double v = log_moment_integral(2, mu);
        CHECK(v < prev);
        prev = v;
    }
    prev = 0.0;
    for (int m = 0; m <= 6; ++m) {
        const double v = log_moment_integral(m, 0.8);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("diagnostics flag cross-checks the closed form") {
    set_specfun_diagnostics(true);
    CHECK(log_moment_integral(2, 1.5) > 0.0);  // passes its own cross-check
    set_specfun_diagnostics(false);
}

TEST_CASE("scalar pFq basics") {
    const std::vector<double> none;
    auto r = scalar_pFq(none, none, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::exp(1.0)).epsilon(1e-14));

    const std::vector<double> a1 = {2.0};
    r = scalar_pFq(a1, none, 0.5);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(4.0).epsilon(1e-13));  // (1-z)^-2

    const std::vector<double> a2 = {1.0, 1.0};
    const std::vector<double> b1 = {2.0};
    r = scalar_pFq(a2, b1, 0.5);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.3862943611198906).epsilon(1e-12));  // 2 ln 2
}

TEST_CASE("scalar pFq terminating series is exact") {
    // 2F0(-2, 1.5; ; z) terminates after 3 terms for any z
    const std::vector<double> a = {-2.0, 1.5};
    const std::vector<double> none;
    const auto r = scalar_pFq(a, none, 3.0);
    CHECK(r.converged);
    // 1 + (-2)(1.5) z + [(-2)(-1)/2!][(1.5)(2.5)] z^2
    CHECK(r.value == doctest::Approx(1.0 - 9.0 + 3.75 * 9.0).epsilon(1e-14));
}

TEST_CASE("scalar pFq divergence and bad parameters") {
    const std::vector<double> a = {1.0, 1.0};
    const std::vector<double> none;
    CHECK_THROWS_AS(scalar_pFq(a, none, 1.0), std::domain_error);  // p > q+1, |z| >= 1
    const std::vector<double> bbad = {-1.0};
    const std::vector<double> a1 = {0.5};
    CHECK_THROWS_AS(scalar_pFq(a1, bbad, 0.3), std::domain_error);  // hits (b)_k = 0
    // non-convergence without divergence: p = q+1 at |z| close to 1
    const std::vector<double> b1 = {0.8};
    const auto r = scalar_pFq(a, b1, 0.999999, 50, 1e-15);
    CHECK_FALSE(r.converged);
}

}  // TEST_SUITE
