#include "mimocap/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mimocap {

CovarianceSpec CovarianceSpec::from_groups(std::vector<EigenGroup> groups) {
    for (const auto& g : groups) {
        if (!(g.eigenvalue > 0.0)) throw std::domain_error("eigenvalue must be positive");
        if (g.multiplicity < 1) throw std::domain_error("multiplicity must be >= 1");
    }
    std::sort(groups.begin(), groups.end(),
              [](const EigenGroup& a, const EigenGroup& b) { return a.eigenvalue > b.eigenvalue; });
    for (std::size_t i = 1; i < groups.size(); ++i) {
        if (groups[i - 1].eigenvalue == groups[i].eigenvalue)
            throw std::domain_error("group eigenvalues must be distinct");
    }
    CovarianceSpec spec;
    spec.groups_ = std::move(groups);
    spec.n_ = 0;
    for (const auto& g : spec.groups_) spec.n_ += g.multiplicity;
    return spec;
}

std::vector<EigenGroup> CovarianceSpec::inverse_groups() const {
    std::vector<EigenGroup> mu(groups_.size());
    // Eigenvalues are stored descending, so 1/eigenvalue comes out
    // descending when traversed in reverse.
    for (std::size_t i = 0; i < groups_.size(); ++i) {
        const auto& g = groups_[groups_.size() - 1 - i];
        mu[i] = {1.0 / g.eigenvalue, g.multiplicity};
    }
    return mu;
}

std::vector<double> CovarianceSpec::expanded_eigenvalues() const {
    std::vector<double> out;
    out.reserve(n_);
    for (const auto& g : groups_)
        out.insert(out.end(), g.multiplicity, g.eigenvalue);
    return out;
}

double CovarianceSpec::trace() const {
    double t = 0.0;
    for (const auto& g : groups_) t += g.multiplicity * g.eigenvalue;
    return t;
}

CovarianceSpec CovarianceSpec::scaled(double c) const {
    if (!(c > 0.0)) throw std::domain_error("scale factor must be positive");
    std::vector<EigenGroup> g = groups_;
    for (auto& e : g) e.eigenvalue *= c;
    return from_groups(std::move(g));
}

namespace {

bool relatively_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

CovarianceSpec canonicalize(std::span<const double> eigenvalues, double merge_tolerance) {
    if (eigenvalues.empty()) throw std::domain_error("eigenvalue list must be nonempty");
    if (merge_tolerance < 0.0) throw std::domain_error("merge tolerance must be >= 0");
    for (double v : eigenvalues) {
        if (!(v > 0.0))
            throw std::domain_error("eigenvalue must be positive, got " + std::to_string(v));
    }

    std::vector<double> sorted(eigenvalues.begin(), eigenvalues.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    // Merge adjacency chains, then repeat on the group means until stable so
    // a second canonicalize pass is a no-op.
    std::vector<EigenGroup> groups;
    for (double v : sorted) groups.push_back({v, 1});
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<EigenGroup> merged;
        std::size_t i = 0;
        while (i < groups.size()) {
            double sum = groups[i].eigenvalue * groups[i].multiplicity;
            int mult = groups[i].multiplicity;
            std::size_t j = i + 1;
            while (j < groups.size() &&
                   relatively_close(groups[j - 1].eigenvalue, groups[j].eigenvalue,
                                    merge_tolerance)) {
                sum += groups[j].eigenvalue * groups[j].multiplicity;
                mult += groups[j].multiplicity;
                changed = true;
                ++j;
            }
            if (j == i + 1) {
                merged.push_back(groups[i]);
            } else {
                merged.push_back({sum / mult, mult});
            }
            i = j;
        }
        groups = std::move(merged);
        if (groups.size() <= 1) break;
        if (!changed) break;
    }

    return CovarianceSpec::from_groups(std::move(groups));
}

MultiplicityIndex index_maps(const std::vector<EigenGroup>& groups) {
    MultiplicityIndex idx;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (int d = groups[g].multiplicity - 1; d >= 0; --d) {
            idx.group.push_back(static_cast<int>(g));
            idx.derivative.push_back(d);
        }
    }
    return idx;
}

MultiplicityIndex index_maps(const CovarianceSpec& spec) {
    return index_maps(spec.inverse_groups());
}

void NetworkScenario::validate() const {
    if (receive_antennas < 1) throw std::domain_error("receive antenna count must be >= 1");
    if (users.empty()) throw std::domain_error("scenario needs at least the desired user");
    if (!(noise_power > 0.0)) throw std::domain_error("noise power must be positive");
    for (std::size_t i = 0; i < users.size(); ++i) {
        if (users[i].antennas < 1)
            throw std::domain_error("user " + std::to_string(i) + ": antenna count must be >= 1");
        if (!(users[i].power > 0.0) || !std::isfinite(users[i].power))
            throw std::domain_error("user " + std::to_string(i) + ": power must be positive");
        if (!(rho(static_cast<int>(i)) > 0.0) || !std::isfinite(rho(static_cast<int>(i))))
            throw std::domain_error("user " + std::to_string(i) + ": rho must be positive");
    }
}

double NetworkScenario::rho(int user) const {
    const auto& u = users.at(static_cast<std::size_t>(user));
    return u.power / (u.antennas * noise_power);
}

double NetworkScenario::total_interference_power() const {
    double p = 0.0;
    for (std::size_t i = 1; i < users.size(); ++i) p += users[i].power;
    return p;
}

double NetworkScenario::snr() const { return users.at(0).power / noise_power; }

double NetworkScenario::sir() const {
    const double pi = total_interference_power();
    if (pi == 0.0) return std::numeric_limits<double>::infinity();
    return users.at(0).power / pi;
}

InterferenceMatrices build_interference_matrices(const NetworkScenario& scenario,
                                                 double merge_tolerance) {
    scenario.validate();
    std::vector<double> psi_values;
    std::vector<double> psi_tilde_values;
    for (std::size_t i = 0; i < scenario.users.size(); ++i) {
        const double rho = scenario.rho(static_cast<int>(i));
        for (int a = 0; a < scenario.users[i].antennas; ++a) {
            psi_tilde_values.push_back(rho);
            if (i >= 1) psi_values.push_back(rho);
        }
    }
    InterferenceMatrices out;
    out.psi_tilde = canonicalize(psi_tilde_values, merge_tolerance);
    out.psi = psi_values.empty() ? CovarianceSpec::empty()
                                 : canonicalize(psi_values, merge_tolerance);
    return out;
}

}  // namespace mimocap
