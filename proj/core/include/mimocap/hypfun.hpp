#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mimocap/signed_log.hpp"

namespace mimocap {

/// Eigenvalues of one argument matrix of a hypergeometric function,
/// grouped by multiplicity. Values must be pairwise distinct; zero groups
/// are allowed (they produce the pure power columns of the rank-deficient
/// case). Stored descending by value.
class EigenArgument {
public:
    static EigenArgument from_values(std::span<const double> values);  // all multiplicity 1
    static EigenArgument from_groups(std::vector<std::pair<double, int>> groups);

    int dimension() const { return m_; }  // total with multiplicity
    const std::vector<std::pair<double, int>>& groups() const { return groups_; }
    bool all_distinct() const;
    std::vector<double> expanded() const;

    /// Smallest relative gap between adjacent distinct values (inf for a
    /// single group); drives the ill-conditioning warning.
    double min_relative_gap() const;

private:
    std::vector<std::pair<double, int>> groups_;
    int m_ = 0;
};

/// f(i, order, w) = d^order/dw^order f_i(w) in signed-log form.
using DerivativeFamily = std::function<SignedLogValue(int i, int order, double w)>;

/// Continuous extension of  det[f_i(w_j)] / prod_{i<j}(w_i - w_j)  to
/// coincident w's: each multiplicity-L group contributes columns
/// f^(L-1), ..., f', f at its value, the surviving Vandermonde factors keep
/// only distinct pairs, and each group divides by Gamma_(L)(L) = prod i!.
/// lambdas are the row-family parameters and must be pairwise distinct.
SignedLogValue confluent_det_ratio(const DerivativeFamily& f,
                                   std::span<const double> lambdas,
                                   const EigenArgument& w_arg,
                                   std::vector<std::string>* warnings = nullptr);

/// 0F0 of two matrix arguments via its determinant representation,
/// generalized to coincident eigenvalues on the w side.
SignedLogValue hyp0F0(const EigenArgument& lambda_arg, const EigenArgument& w_arg,
                      std::vector<std::string>* warnings = nullptr);

/// 1F0(r; Lambda, W); requires 1 - lambda_i w_j != 0 for all pairs.
SignedLogValue hyp1F0(double r, const EigenArgument& lambda_arg, const EigenArgument& w_arg,
                      std::vector<std::string>* warnings = nullptr);

/// pFq(a; b; Lambda, W) with scalar-series elements; coincident w groups use
/// parameter-shifted series columns. Series divergence surfaces as
/// std::domain_error.
SignedLogValue hyp_pFq(std::span<const double> a, std::span<const double> b,
                       const EigenArgument& lambda_arg, const EigenArgument& w_arg,
                       std::vector<std::string>* warnings = nullptr);

}  // namespace mimocap
