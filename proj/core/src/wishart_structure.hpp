#pragma once

#include <vector>

#include "mimocap/covariance.hpp"
#include "mimocap/signed_log.hpp"

namespace mimocap::detail {

/// Shared row structure of the eigenvalue density and the capacity
/// determinants: mu-descending groups, row index maps, and the
/// normalization constant K.
struct WishartStructure {
    int n = 0;
    int p = 0;
    int n_min = 0;
    std::vector<double> mu;   // distinct eigenvalues of Phi^-1, descending
    std::vector<int> mult;    // multiplicities m_i
    MultiplicityIndex index;  // row -> (group, derivative order)
    SignedLogValue constant;  // K
    double min_mu_gap = 0.0;  // smallest relative gap between mu groups
};

WishartStructure make_wishart_structure(const CovarianceSpec& spec, int p);

/// Entry of the constant tail columns: [n-J]_d * mu^(n-J-d) for 1-based
/// column J in (n_min, n].
SignedLogValue power_column_entry(int n, int col_1based, int d, double mu);

}  // namespace mimocap::detail
