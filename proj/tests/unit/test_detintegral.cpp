#include <doctest.h>

#include <initializer_list>

#include <mimocap/capacity.hpp>
#include <mimocap/quadrature.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace mimocap;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("detintegral") {

TEST_CASE("scalar case collapses to a single integral") {
    DetIntegralSpec spec;
    spec.phi = {[](double) { return 1.0; }};
    spec.psi = {[](double) { return 1.0; }};
    spec.xi = [](double x) { return std::exp(-x); };
    spec.xi_tilde = [](double) { return 1.0; };
    spec.lower = 0.0;
    spec.upper = kInf;
    CHECK(det_integral_identity(spec) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("p=2, n=2 matches nested ordered-domain quadrature") {
    DetIntegralSpec spec;
    spec.phi = {[](double) { return 1.0; }, [](double x) { return x; }};
    spec.psi = {[](double x) { return std::exp(-x); },
                [](double x) { return std::exp(-2.0 * x); }};
    spec.xi = [](double x) { return std::exp(-0.5 * x); };
    spec.xi_tilde = [](double x) { return std::log1p(x); };
    spec.lower = 0.0;
    spec.upper = 4.0;
    const double got = det_integral_identity(spec);

    const auto f = [&](double x1, double x2) {
        const double dphi = 1.0 * x2 - 1.0 * x1;
        const double dpsi = std::exp(-x1) * std::exp(-2.0 * x2) -
                            std::exp(-x2) * std::exp(-2.0 * x1);
        return dphi * dpsi * spec.xi(x1) * spec.xi(x2) *
               (spec.xi_tilde(x1) + spec.xi_tilde(x2));
    };
    const double want =
        integrate(
            [&](double x1) {
                return integrate([&](double x2) { return f(x1, x2); }, 0.0, x1, 1e-11, 14)
                    .value;
            },
            0.0, 4.0, 1e-10, 14)
            .value;
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("p=2, n=3 with a constant column matches nested quadrature") {
    DetIntegralSpec spec;
    spec.phi = {[](double) { return 1.0; }, [](double x) { return x; }};
    spec.psi = {[](double x) { return std::exp(-1.5 * x); },
                [](double x) { return x * std::exp(-x); },
                [](double x) { return std::exp(-2.5 * x); }};
    spec.psi_const = {{0.8}, {-0.4}, {1.7}};
    spec.xi = [](double x) { return std::exp(-0.3 * x); };
    spec.xi_tilde = [](double x) { return std::log1p(x); };
    spec.lower = 0.0;
    spec.upper = kInf;
    const double got = det_integral_identity(spec);

    const auto psi_det = [&](double x1, double x2) {
        double m[3][3];
        for (int i = 0; i < 3; ++i) {
            m[i][0] = spec.psi[static_cast<std::size_t>(i)](x1);
            m[i][1] = spec.psi[static_cast<std::size_t>(i)](x2);
            m[i][2] = spec.psi_const[static_cast<std::size_t>(i)][0];
        }
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const double want =
        integrate(
            [&](double x1) {
                return integrate(
                           [&](double x2) {
                               return (x2 - x1) * psi_det(x1, x2) * spec.xi(x1) *
                                      spec.xi(x2) *
                                      (spec.xi_tilde(x1) + spec.xi_tilde(x2));
                           },
                           0.0, x1, 1e-11, 14)
                    .value;
            },
            0.0, kInf, 1e-10, 14)
            .value;
    CHECK(got == doctest::Approx(want).epsilon(1e-4));
}

TEST_CASE("capacity routes through the identity") {
    // Theorem-style cross-check: the capacity determinants are exactly the
    // identity applied to the Vandermonde / density-row pair.
    const CovarianceSpec cov = CovarianceSpec::from_groups({{1.6, 1}, {0.5, 1}});
    const int p = 2;
    std::vector<double> mu;
    for (const auto& g : cov.inverse_groups()) mu.push_back(g.eigenvalue);

    DetIntegralSpec spec;
    spec.phi = {[](double) { return 1.0; }, [](double x) { return x; }};
    spec.psi = {[m = mu[0]](double x) { return std::exp(-m * x); },
                [m = mu[1]](double x) { return std::exp(-m * x); }};
    spec.xi = [](double) { return 1.0; };  // p = n: no power weight
    spec.xi_tilde = [](double x) { return std::log1p(x); };
    spec.lower = 0.0;
    spec.upper = kInf;
    const double sum = det_integral_identity(spec, 1e-12);

    const double k = mu[0] * mu[0] * mu[1] * mu[1] / (mu[0] - mu[1]);
    const double from_identity = k * sum;
    const double closed = capacity_su(cov, p).value_nats;
    CHECK(from_identity == doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("non-finite element integrals are named") {
    DetIntegralSpec spec;
    spec.phi = {[](double) { return 1.0; }};
    spec.psi = {[](double x) { return std::exp(1.0 / x); }};  // blows up at the lower end
    spec.xi = [](double) { return 1.0; };
    spec.xi_tilde = [](double) { return 1.0; };
    spec.lower = 0.0;
    spec.upper = 1.0;
    try {
        (void)det_integral_identity(spec, 1e-8, 10);
        FAIL("expected a domain error");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("i=0") != std::string::npos);
        CHECK(std::string(e.what()).find("j=0") != std::string::npos);
    }
    DetIntegralSpec bad;
    bad.phi = {[](double) { return 1.0; }};
    bad.psi = {};
    bad.xi = bad.xi_tilde = [](double) { return 1.0; };
    CHECK_THROWS_AS(det_integral_identity(bad), std::invalid_argument);
}

}  // TEST_SUITE
