#pragma once

#include <span>
#include <vector>

namespace mimocap {

struct EigenGroup {
    double eigenvalue = 0.0;  // eigenvalue of the correlation matrix, > 0
    int multiplicity = 0;

    bool operator==(const EigenGroup&) const = default;
};

/// Positive-definite one-sided correlation matrix represented by its
/// distinct eigenvalues and multiplicities. Groups are kept with
/// eigenvalues strictly decreasing, i.e. the inverse eigenvalues
/// mu_(i) = 1/eigenvalue used by the density and capacity formulas are
/// strictly increasing; inverse_groups() returns the mu-descending view
/// those formulas index.
class CovarianceSpec {
public:
    CovarianceSpec() = default;

    /// groups: strictly positive, pairwise-distinct eigenvalues.
    static CovarianceSpec from_groups(std::vector<EigenGroup> groups);
    static CovarianceSpec empty() { return CovarianceSpec(); }

    int dimension() const { return n_; }
    bool is_empty() const { return n_ == 0; }
    int group_count() const { return static_cast<int>(groups_.size()); }

    /// Eigenvalue-descending groups of the correlation matrix itself.
    const std::vector<EigenGroup>& groups() const { return groups_; }

    /// Groups keyed by mu = 1/eigenvalue, mu strictly decreasing.
    std::vector<EigenGroup> inverse_groups() const;

    /// All n eigenvalues, repeated per multiplicity, descending.
    std::vector<double> expanded_eigenvalues() const;

    double trace() const;

    /// Returns a spec with every eigenvalue scaled by c > 0.
    CovarianceSpec scaled(double c) const;

    bool operator==(const CovarianceSpec&) const = default;

private:
    std::vector<EigenGroup> groups_;
    int n_ = 0;
};

/// Merge near-coincident eigenvalues (relative gap <= merge_tolerance) into
/// multiplicity groups and sort canonically. Merged groups take the
/// arithmetic mean of their members. The confluent determinant formulas are
/// exact for merged groups, while nearly-equal distinct values are
/// ill-conditioned, so merging is the numerically safe direction.
CovarianceSpec canonicalize(std::span<const double> eigenvalues,
                            double merge_tolerance = 1e-9);

/// Row-index bookkeeping for multiplicity groups: row i of the determinant
/// formulas uses group e[i] (0-based) with derivative order d[i]; within a
/// group of multiplicity m the orders run m-1, m-2, ..., 0.
struct MultiplicityIndex {
    std::vector<int> group;       // e_i
    std::vector<int> derivative;  // d_i
};

/// Index maps over an explicit group ordering (as used for the mu view).
MultiplicityIndex index_maps(const std::vector<EigenGroup>& groups);

/// Index maps of the spec's inverse-eigenvalue (mu-descending) view, the
/// ordering used by the joint pdf and capacity formulas.
MultiplicityIndex index_maps(const CovarianceSpec& spec);

struct UserTerminal {
    int antennas = 0;    // N_T of this user
    double power = 0.0;  // mean received power per user, linear
};

/// Desired link plus interferers. users[0] is the desired transmitter.
struct NetworkScenario {
    int receive_antennas = 0;  // N_R
    std::vector<UserTerminal> users;
    double noise_power = 1.0;  // sigma^2

    void validate() const;

    int interferer_count() const { return static_cast<int>(users.size()) - 1; }

    /// rho_i = P_i / (N_T,i * sigma^2)
    double rho(int user) const;

    double total_interference_power() const;
    double snr() const;  // P_0 / sigma^2
    double sir() const;  // P_0 / sum_{i>=1} P_i; +inf with no interferers
};

struct InterferenceMatrices {
    CovarianceSpec psi;        // interferers only; empty when none
    CovarianceSpec psi_tilde;  // desired user ++ interferers
};

/// Direct-sum covariance eigenstructure of the multiuser model: each user
/// contributes eigenvalue rho_i with multiplicity N_T,i; equal rho values
/// merge into one group.
InterferenceMatrices build_interference_matrices(const NetworkScenario& scenario,
                                                 double merge_tolerance = 1e-9);

}  // namespace mimocap
