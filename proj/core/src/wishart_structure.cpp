#include "wishart_structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mimocap::detail {

WishartStructure make_wishart_structure(const CovarianceSpec& spec, int p) {
    if (spec.is_empty()) throw std::invalid_argument("covariance spec must be nonempty");
    if (p < 1) throw std::invalid_argument("Gaussian matrix row count p must be >= 1");

    WishartStructure s;
    s.n = spec.dimension();
    s.p = p;
    s.n_min = std::min(s.n, p);

    const std::vector<EigenGroup> mu_groups = spec.inverse_groups();
    for (const auto& g : mu_groups) {
        s.mu.push_back(g.eigenvalue);
        s.mult.push_back(g.multiplicity);
    }
    s.index = index_maps(mu_groups);

    // K = (-1)^(p(n - n_min)) / Gamma_(n_min)(p)
    //     * prod mu_i^(m_i p) / (prod Gamma_(m_i)(m_i) prod_{i<j}(mu_i - mu_j)^(m_i m_j))
    double logmag = 0.0;
    for (int i = 1; i <= s.n_min; ++i) logmag -= std::lgamma(p - i + 1.0);
    const std::size_t groups = s.mu.size();
    for (std::size_t i = 0; i < groups; ++i) {
        logmag += s.mult[i] * static_cast<double>(p) * std::log(s.mu[i]);
        for (int t = 1; t <= s.mult[i] - 1; ++t) logmag -= std::lgamma(t + 1.0);
    }
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < groups; ++i) {
        for (std::size_t j = i + 1; j < groups; ++j) {
            const double gap = s.mu[i] - s.mu[j];  // positive: mu descending
            logmag -= s.mult[i] * static_cast<double>(s.mult[j]) * std::log(gap);
            min_gap = std::min(min_gap, gap / std::max(s.mu[i], s.mu[j]));
        }
    }
    s.min_mu_gap = min_gap;
    const int sign = (static_cast<long>(p) * (s.n - s.n_min)) % 2 == 0 ? 1 : -1;
    s.constant = SignedLogValue::from_log(sign, logmag);
    return s;
}

SignedLogValue power_column_entry(int n, int col_1based, int d, double mu) {
    const int a = n - col_1based;  // falling-factorial base, >= 0
    if (d > a) return SignedLogValue::zero();
    double log_ff = 0.0;
    for (int t = 0; t < d; ++t) log_ff += std::log(static_cast<double>(a - t));
    return SignedLogValue::from_log(1, log_ff + (a - d) * std::log(mu));
}

}  // namespace mimocap::detail
