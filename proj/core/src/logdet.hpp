#pragma once

#include <Eigen/Dense>

#include <boost/multiprecision/mpfr.hpp>

#include "mimocap/signed_log.hpp"

namespace mimocap::detail {

/// Dense matrix held in (sign, log magnitude) split form so entries spanning
/// hundreds of orders of magnitude survive until the determinant.
class LogMatrix {
public:
    LogMatrix(int rows, int cols)
        : logmag_(Eigen::MatrixXd::Constant(rows, cols,
                                            -std::numeric_limits<double>::infinity())),
          sign_(Eigen::MatrixXi::Zero(rows, cols)) {}

    int rows() const { return static_cast<int>(logmag_.rows()); }
    int cols() const { return static_cast<int>(logmag_.cols()); }

    void set(int i, int j, const SignedLogValue& v) {
        sign_(i, j) = v.sign;
        logmag_(i, j) = v.sign == 0 ? -std::numeric_limits<double>::infinity() : v.logmag;
    }

    SignedLogValue get(int i, int j) const {
        return SignedLogValue::from_log(sign_(i, j), logmag_(i, j));
    }

    const Eigen::MatrixXd& logmag() const { return logmag_; }
    const Eigen::MatrixXi& sign() const { return sign_; }

private:
    Eigen::MatrixXd logmag_;
    Eigen::MatrixXi sign_;
};

struct LogDetResult {
    SignedLogValue det;
    /// Sum of per-row maximum log magnitudes: the natural magnitude scale of
    /// the determinant before cancellation. det.logmag far below this means
    /// the value came out of heavy cancellation.
    double log_scale = 0.0;
};

/// Determinant by complete-pivot elimination on the row-equilibrated matrix,
/// escalating to quadruple and then arbitrary precision when the pivot
/// grading exceeds what the current precision resolves at the requested
/// relative tolerance (the relative error of an elimination is roughly
/// eps * pivot-span).
///
/// significance_floor: log magnitude below which the caller does not care
/// about the value (e.g. a density evaluated deep in its tail). Escalation
/// is skipped when even an upper bound on |det| stays below the floor.
LogDetResult signed_log_det(const LogMatrix& m,
                            double significance_floor = -std::numeric_limits<double>::infinity(),
                            double rel_tol = 1e-9);

struct MpElimResult {
    bool ok = false;  // false: exactly singular
    int sign = 0;
    double log_det = 0.0;
    double log_span = 0.0;  // pivot dynamic range, natural log
};

/// Complete-pivot elimination of an n x n matrix given in MPFR entries (at
/// the caller's precision); destroys a. Used by callers whose entries must
/// themselves be produced beyond double accuracy.
MpElimResult mpfr_eliminate(std::vector<boost::multiprecision::mpfr_float>& a, int n);

}  // namespace mimocap::detail
