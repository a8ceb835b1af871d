#include <doctest.h>

#include <initializer_list>

#include <mimocap/covariance.hpp>
#include <mimocap/rng.hpp>

#include <algorithm>
#include <stdexcept>
#include <vector>

using namespace mimocap;

TEST_SUITE("covariance") {

TEST_CASE("canonicalize merges exact duplicates") {
    const auto spec = canonicalize(std::vector<double>{2.0, 2.0, 0.5});
    REQUIRE(spec.group_count() == 2);
    CHECK(spec.groups()[0].eigenvalue == doctest::Approx(2.0));
    CHECK(spec.groups()[0].multiplicity == 2);
    CHECK(spec.groups()[1].eigenvalue == doctest::Approx(0.5));
    CHECK(spec.groups()[1].multiplicity == 1);
    // mu view: descending inverse eigenvalues
    const auto mu = spec.inverse_groups();
    CHECK(mu[0].eigenvalue == doctest::Approx(2.0));  // 1/0.5
    CHECK(mu[0].multiplicity == 1);
    CHECK(mu[1].eigenvalue == doctest::Approx(0.5));  // 1/2.0
    CHECK(mu[1].multiplicity == 2);
    CHECK(spec.dimension() == 3);
}

TEST_CASE("canonicalize identity case") {
    const auto spec = canonicalize(std::vector<double>{1.0});
    REQUIRE(spec.group_count() == 1);
    CHECK(spec.groups()[0].eigenvalue == doctest::Approx(1.0));
    CHECK(spec.groups()[0].multiplicity == 1);
}

TEST_CASE("canonicalize merges near-duplicates at tolerance") {
    const auto spec = canonicalize(std::vector<double>{1.0, 1.0 + 1e-9, 3.0}, 1e-6);
    REQUIRE(spec.group_count() == 2);
    CHECK(spec.groups()[0].eigenvalue == doctest::Approx(3.0));
    CHECK(spec.groups()[1].eigenvalue == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(spec.groups()[1].multiplicity == 2);
}

TEST_CASE("canonicalize rejects bad input") {
    CHECK_THROWS_AS(canonicalize(std::vector<double>{}), std::domain_error);
    CHECK_THROWS_AS(canonicalize(std::vector<double>{1.0, -0.5}), std::domain_error);
    CHECK_THROWS_AS(canonicalize(std::vector<double>{0.0}), std::domain_error);
}

TEST_CASE("canonicalize is idempotent and permutation invariant") {
    CounterRng rng(5, 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> values;
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        for (int i = 0; i < n; ++i) {
            double v = 0.1 + 3.0 * rng.next_unit();
            values.push_back(v);
            if (rng.next_u64() % 2 == 0) values.push_back(v * (1.0 + 1e-12));  // near-dup
        }
        const auto once = canonicalize(values);
        std::vector<double> again;
        for (const auto& g : once.groups())
            again.insert(again.end(), g.multiplicity, g.eigenvalue);
        CHECK(canonicalize(again) == once);

        std::vector<double> shuffled = values;
        for (std::size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[rng.next_u64() % i]);
        CHECK(canonicalize(shuffled) == once);
    }
}

TEST_CASE("index maps match the multiplicity structure") {
    // groups (mu1, 2), (mu2, 1)
    const auto idx = index_maps(std::vector<EigenGroup>{{2.0, 2}, {0.5, 1}});
    CHECK(idx.group == std::vector<int>{0, 0, 1});
    CHECK(idx.derivative == std::vector<int>{1, 0, 0});

    const auto idx3 = index_maps(std::vector<EigenGroup>{{3.0, 1}, {2.0, 1}, {1.0, 1}});
    CHECK(idx3.derivative == std::vector<int>{0, 0, 0});

    const auto idx1 = index_maps(std::vector<EigenGroup>{{1.0, 3}});
    CHECK(idx1.group == std::vector<int>{0, 0, 0});
    CHECK(idx1.derivative == std::vector<int>{2, 1, 0});
}

TEST_CASE("index map invariants on random specs") {
    CounterRng rng(6, 0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<EigenGroup> groups;
        const int g = 1 + static_cast<int>(rng.next_u64() % 4);
        for (int i = 0; i < g; ++i)
            groups.push_back({1.0 + i + rng.next_unit() * 0.5,
                              1 + static_cast<int>(rng.next_u64() % 3)});
        const auto spec = CovarianceSpec::from_groups(groups);
        const auto idx = index_maps(spec);
        const auto mu = spec.inverse_groups();
        int offset = 0;
        for (std::size_t k = 0; k < mu.size(); ++k) {
            for (int r = 0; r < mu[k].multiplicity; ++r) {
                const int i = offset + r;
                CHECK(idx.group[i] == static_cast<int>(k));
                CHECK(idx.derivative[i] == mu[k].multiplicity - 1 - r);
                CHECK(idx.derivative[i] < mu[k].multiplicity);
            }
            offset += mu[k].multiplicity;
        }
        CHECK(offset == spec.dimension());
    }
}

TEST_CASE("interference matrices: equal powers merge") {
    NetworkScenario s;
    s.receive_antennas = 6;
    s.noise_power = 1.0;
    const double p = 4.2;
    s.users = {{6, p}, {6, p}};
    const auto m = build_interference_matrices(s);
    REQUIRE(m.psi.group_count() == 1);
    CHECK(m.psi.groups()[0].eigenvalue == doctest::Approx(p / 6.0));
    CHECK(m.psi.groups()[0].multiplicity == 6);
    REQUIRE(m.psi_tilde.group_count() == 1);
    CHECK(m.psi_tilde.groups()[0].multiplicity == 12);
}

TEST_CASE("interference matrices: mixed powers merge by rho") {
    NetworkScenario s;
    s.receive_antennas = 6;
    s.noise_power = 1.0;
    s.users = {{3, 1.0}, {2, 0.5}, {1, 0.25}};  // rho = 1/3, 1/4, 1/4
    const auto m = build_interference_matrices(s);
    REQUIRE(m.psi.group_count() == 1);
    CHECK(m.psi.groups()[0].eigenvalue == doctest::Approx(0.25));
    CHECK(m.psi.groups()[0].multiplicity == 3);
    REQUIRE(m.psi_tilde.group_count() == 2);
    CHECK(m.psi_tilde.groups()[0].eigenvalue == doctest::Approx(1.0 / 3.0));
    CHECK(m.psi_tilde.groups()[0].multiplicity == 3);
    CHECK(m.psi_tilde.groups()[1].eigenvalue == doctest::Approx(0.25));
    CHECK(m.psi_tilde.groups()[1].multiplicity == 3);
}

TEST_CASE("interference matrices: no interferers give empty psi") {
    NetworkScenario s;
    s.receive_antennas = 4;
    s.noise_power = 1.0;
    s.users = {{2, 1.5}};
    const auto m = build_interference_matrices(s);
    CHECK(m.psi.is_empty());
    CHECK(m.psi_tilde.dimension() == 2);
}

TEST_CASE("scenario validation") {
    NetworkScenario s;
    s.receive_antennas = 0;
    s.users = {{2, 1.0}};
    CHECK_THROWS_AS(s.validate(), std::domain_error);
    s.receive_antennas = 2;
    s.users[0].power = -1.0;
    CHECK_THROWS_AS(s.validate(), std::domain_error);
    s.users[0].power = 1.0;
    s.noise_power = 0.0;
    CHECK_THROWS_AS(s.validate(), std::domain_error);
}

}  // TEST_SUITE
