#include <doctest.h>

#include <initializer_list>

#include <mimocap/quadrature.hpp>

#include <cmath>
#include <limits>

using mimocap::integrate;

TEST_SUITE("quadrature") {

TEST_CASE("finite and semi-infinite basics") {
    const double inf = std::numeric_limits<double>::infinity();
    auto r = integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    r = integrate([](double x) { return std::exp(-x); }, 0.0, inf);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));

    r = integrate([](double x) { return x * x * x * std::exp(-x); }, 0.0, inf);
    CHECK(r.value == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("integrable endpoint spike converges slowly but honestly") {
    auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10, 20);
    CHECK(r.value == doctest::Approx(2.0).epsilon(5e-4));
    // the reported error estimate must cover the true error
    CHECK(std::abs(r.value - 2.0) <= 10.0 * r.abs_error);
}

}  // TEST_SUITE
