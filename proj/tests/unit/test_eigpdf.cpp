#include <doctest.h>

#include <initializer_list>

#include <mimocap/eigpdf.hpp>
#include <mimocap/quadrature.hpp>
#include <mimocap/rng.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace mimocap;

namespace {

// Independent oracle: the all-distinct p >= n density written out directly,
//   f(x) = 1/Gamma_(n)(p) * prod mu_i^p / prod_{i<j}(mu_i - mu_j)
//          * |V(x)| * |e^{-mu_i x_j}| * prod x_j^{p-n}
double distinct_density_oracle(const std::vector<double>& mu, int p,
                               const std::vector<double>& x) {
    const int n = static_cast<int>(mu.size());
    double k = 1.0;
    for (int i = 1; i <= n; ++i) k /= std::tgamma(p - i + 1.0);
    for (double m : mu) k *= std::pow(m, p);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) k /= (mu[i] - mu[j]);

    // det V(x), v_{ij} = x_j^{i-1}
    double vdm = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) vdm *= (x[j] - x[i]);

    // det e^{-mu_i x_j} by cofactor (n <= 3 in tests)
    std::vector<std::vector<double>> g(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[i][j] = std::exp(-mu[i] * x[j]);
    double det = 0.0;
    if (n == 1) {
        det = g[0][0];
    } else if (n == 2) {
        det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    } else {
        det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
              g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
              g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    }

    double pw = 1.0;
    for (double xi : x) pw *= std::pow(xi, p - n);
    return k * vdm * det * pw;
}

}  // namespace

TEST_SUITE("eigpdf") {

TEST_CASE("n=p=1 is the standard exponential") {
    const EigenvaluePdf pdf(CovarianceSpec::from_groups({{1.0, 1}}), 1);
    for (double x : {0.05, 0.8, 2.5, 7.0}) {
        const std::vector<double> xs = {x};
        CHECK(pdf(xs) == doctest::Approx(std::exp(-x)).epsilon(1e-13));
    }
}

TEST_CASE("n=2, p=1 identity covariance gives the Erlang-2 density") {
    const EigenvaluePdf pdf(CovarianceSpec::from_groups({{1.0, 2}}), 1);
    for (double x : {0.1, 0.9, 1.3, 4.2}) {
        const std::vector<double> xs = {x};
        CHECK(pdf(xs) == doctest::Approx(x * std::exp(-x)).epsilon(1e-13));
    }
}

TEST_CASE("n=p=2 identity covariance matches the classical Wishart density") {
    const EigenvaluePdf pdf(CovarianceSpec::from_groups({{1.0, 2}}), 2);
    CounterRng rng(11, 0);
    for (int t = 0; t < 10; ++t) {
        double a = 4.0 * rng.next_unit() + 0.01;
        double b = 4.0 * rng.next_unit() + 0.01;
        if (a < b) std::swap(a, b);
        if (a == b) continue;
        const std::vector<double> xs = {a, b};
        const double want = (a - b) * (a - b) * std::exp(-a - b);
        CHECK(pdf(xs) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("all-distinct multiplicities reduce to the known density") {
    CounterRng rng(12, 0);
    const std::vector<EigenGroup> groups = {{1.8, 1}, {0.9, 1}, {0.35, 1}};
    const CovarianceSpec spec = CovarianceSpec::from_groups(groups);
    const int p = 5;  // p >= n branch
    const EigenvaluePdf pdf(spec, p);
    std::vector<double> mu;
    for (const auto& g : spec.inverse_groups()) mu.push_back(g.eigenvalue);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> x = {8.0 * rng.next_unit() + 2.0, 2.0 * rng.next_unit() + 0.5,
                                 0.4 * rng.next_unit() + 0.01};
        std::sort(x.begin(), x.end(), std::greater<>());
        const double want = distinct_density_oracle(mu, p, x);
        CHECK(pdf(x) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("scaling the covariance rescales the argument") {
    // f_{c Phi}(x) = f_Phi(x/c) / c^{n_min}
    const CovarianceSpec spec = CovarianceSpec::from_groups({{1.2, 2}, {0.4, 1}});
    const double c = 2.7;
    const EigenvaluePdf base(spec, 2);
    const EigenvaluePdf scaled(spec.scaled(c), 2);
    const std::vector<double> x = {3.1, 0.8};
    const std::vector<double> xc = {3.1 / c, 0.8 / c};
    CHECK(scaled(x) == doctest::Approx(base(xc) / (c * c)).epsilon(1e-11));
}

TEST_CASE("nonnegative on random ordered points") {
    const std::vector<std::pair<CovarianceSpec, int>> cases = {
        {CovarianceSpec::from_groups({{1.0, 2}, {0.5, 1}}), 2},
        {CovarianceSpec::from_groups({{2.0, 1}, {0.8, 2}}), 4},
        {CovarianceSpec::from_groups({{0.7, 3}}), 2},
    };
    CounterRng rng(13, 0);
    for (const auto& [spec, p] : cases) {
        const EigenvaluePdf pdf(spec, p);
        const int n_min = pdf.n_min();
        for (int t = 0; t < 10000; ++t) {
            std::vector<double> x(n_min);
            for (double& v : x) v = 12.0 * rng.next_unit() + 1e-6;
            std::sort(x.begin(), x.end(), std::greater<>());
            bool distinct = true;
            for (int i = 1; i < n_min; ++i) distinct = distinct && x[i - 1] > x[i];
            if (!distinct) continue;
            CHECK(pdf(x) >= 0.0);
        }
    }
}

TEST_CASE("argument validation") {
    const EigenvaluePdf pdf(CovarianceSpec::from_groups({{1.0, 2}}), 2);
    CHECK_THROWS_AS(pdf(std::vector<double>{1.0}), std::domain_error);        // wrong size
    CHECK_THROWS_AS(pdf(std::vector<double>{1.0, 2.0}), std::domain_error);   // ascending
    CHECK_THROWS_AS(pdf(std::vector<double>{2.0, -1.0}), std::domain_error);  // nonpositive
    CHECK_THROWS_AS(pdf(std::vector<double>{2.0, 2.0}), std::domain_error);   // tie
}

TEST_CASE("normalization integrates to one") {
    {
        const EigenvaluePdf pdf(CovarianceSpec::from_groups({{0.9, 1}}), 1);
        const auto rep = normalization_check(pdf, 12);
        CHECK(std::abs(rep.value - 1.0) < 1e-8);
    }
    {
        const EigenvaluePdf pdf(CovarianceSpec::from_groups({{1.0, 1}, {0.5, 1}}), 2);
        const auto rep = normalization_check(pdf, 10);
        CHECK(std::abs(rep.value - 1.0) < 1e-4);
    }
    {
        // n=3, p=2: quadratic-form branch with a power column
        const EigenvaluePdf pdf(CovarianceSpec::from_groups({{1.0, 2}, {0.5, 1}}), 2);
        const auto rep = normalization_check(pdf, 10);
        CHECK(std::abs(rep.value - 1.0) < 1e-4);
    }
    CHECK_THROWS_AS(
        normalization_check(EigenvaluePdf(CovarianceSpec::from_groups({{1.0, 4}}), 4), 8),
        std::invalid_argument);
}

TEST_CASE("sample mean matches the trace identity") {
    // E sum lambda_i = E tr(H Phi H^dag) = p tr(Phi)
    const CovarianceSpec spec = CovarianceSpec::from_groups({{1.4, 2}, {0.3, 1}});
    const int p = 2;
    const int count = 100000;
    const auto samples = sample_eigenvalues(spec, p, count, 77);
    double mean = 0.0, sq = 0.0;
    for (const auto& s : samples) {
        double t = 0.0;
        for (double v : s) t += v;
        mean += t;
        sq += t * t;
    }
    mean /= count;
    const double var = (sq - count * mean * mean) / (count - 1);
    const double se = std::sqrt(var / count);
    CHECK(std::abs(mean - p * spec.trace()) < 3.0 * se);
}

TEST_CASE("sampling is deterministic and shard-mergeable") {
    const CovarianceSpec spec = CovarianceSpec::from_groups({{1.0, 2}}), spec2 = spec;
    const auto a = sample_eigenvalues(spec, 2, 50, 9);
    const auto b = sample_eigenvalues(spec2, 2, 50, 9);
    CHECK(a == b);
    // drawing fewer samples yields a prefix: draws depend only on (seed, index)
    const auto c = sample_eigenvalues(spec, 2, 10, 9);
    for (int i = 0; i < 10; ++i) CHECK(a[i] == c[i]);
}

TEST_CASE("largest-eigenvalue histogram matches the marginal from the joint pdf") {
    const CovarianceSpec spec = CovarianceSpec::from_groups({{1.0, 2}}), spec_id = spec;
    const int p = 2;
    const EigenvaluePdf pdf(spec_id, p);
    const int count = 100000;
    const auto samples = sample_eigenvalues(spec, p, count, 123);
    const int bins = 24;
    const double x_max = 12.0;
    const auto hist = eigenvalue_histogram(samples, 0, bins, 0.0, x_max);
    for (const auto& bin : hist) {
        // marginal of x1 over the bin: int_bin dx1 int_0^x1 dx2 f(x1, x2)
        const double prob =
            integrate(
                [&](double x1) {
                    return integrate(
                               [&](double x2) {
                                   return pdf(std::vector<double>{x1, x2});
                               },
                               0.0, x1, 1e-9, 12)
                        .value;
                },
                bin.left, bin.right, 1e-8, 12)
                .value;
        const double expected_density = prob / (bin.right - bin.left);
        const double tol = 3.0 * std::max(bin.std_error, 1e-4 / (bin.right - bin.left));
        CHECK(std::abs(bin.density - expected_density) <= tol);
    }
}

}  // TEST_SUITE
