#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mimocap/covariance.hpp"
#include "mimocap/signed_log.hpp"

namespace mimocap {

/// Joint pdf of the ordered nonzero eigenvalues of W = H Phi H^dag with H a
/// p x n complex standard Gaussian matrix, covering the Wishart (p >= n) and
/// quadratic-form (n >= p) cases for any eigenvalue multiplicities of Phi.
class EigenvaluePdf {
public:
    EigenvaluePdf(CovarianceSpec spec, int p);

    const CovarianceSpec& spec() const { return spec_; }
    int p() const { return p_; }
    int n() const { return spec_.dimension(); }
    int n_min() const { return n_min_; }

    /// Normalization constant K of the density.
    SignedLogValue normalization_constant() const { return k_; }

    /// pdf at strictly descending positive x (length n_min). Values whose
    /// upper bound falls below 1e-12 absolute are reported as 0 (they are
    /// unobservable at the library's accuracy targets and skipping them
    /// keeps tail evaluations cheap).
    double operator()(std::span<const double> x) const;

    /// Signed-log pdf without the tail cutoff; useful deep in the tails.
    SignedLogValue log_value(std::span<const double> x) const;

private:
    CovarianceSpec spec_;
    int p_ = 0;
    int n_min_ = 0;
    SignedLogValue k_;
    SignedLogValue eval(std::span<const double> x, bool tail_cutoff) const;

    std::vector<double> row_mu_;  // mu_(e_i) per row, mu-descending view
    std::vector<int> row_d_;      // d_i per row
    std::vector<SignedLogValue> power_cols_;  // x-independent tail columns, row-major
};

inline double joint_pdf(const EigenvaluePdf& pdf, std::span<const double> x) {
    return pdf(x);
}

struct NormalizationReport {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = false;
};

/// Integrates the joint pdf over the ordered positive orthant by nested
/// adaptive quadrature; n_min <= 3 only (cost grows with nesting depth).
/// Non-convergence is reported with the achieved estimate, not thrown.
NormalizationReport normalization_check(const EigenvaluePdf& pdf, int quadrature_depth = 10);

/// Monte Carlo oracle: draws H, forms H Phi H^dag, returns the descending
/// nonzero eigenvalues of each draw. Deterministic per (seed, sample index),
/// so shards are reproducible and mergeable.
std::vector<std::vector<double>> sample_eigenvalues(const CovarianceSpec& spec, int p,
                                                    int count, std::uint64_t seed);

struct HistogramBin {
    double left = 0.0;
    double right = 0.0;
    double density = 0.0;
    double std_error = 0.0;
};

/// Histogram of the component-th largest eigenvalue (0 = largest) with
/// binomial standard errors per bin, density-normalized.
std::vector<HistogramBin> eigenvalue_histogram(const std::vector<std::vector<double>>& samples,
                                               int component, int bins, double x_min,
                                               double x_max);

}  // namespace mimocap
