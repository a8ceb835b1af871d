#include "logdet.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <quadmath.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace mimocap::detail {

namespace {

using mpfr_float = boost::multiprecision::mpfr_float;

template <typename Real>
double log_abs(const Real& v) {
    if constexpr (std::is_same_v<Real, double>) {
        return std::log(std::abs(v));
    } else if constexpr (std::is_same_v<Real, __float128>) {
        // logmag is carried in double anyway; only fall back to the slow
        // quad log when the value leaves double range.
        const double dv = static_cast<double>(v);
        if (dv != 0.0 && std::isfinite(dv)) return std::log(std::abs(dv));
        return static_cast<double>(logq(fabsq(v)));
    } else {
        return static_cast<double>(boost::multiprecision::log(boost::multiprecision::abs(v)));
    }
}

template <typename Real>
Real exp_of(double x) {
    if constexpr (std::is_same_v<Real, double>) {
        return std::exp(x);
    } else if constexpr (std::is_same_v<Real, __float128>) {
        // Entry values only carry double-log accuracy; use the fast double
        // exp unless it would underflow.
        if (x > -700.0) return static_cast<__float128>(std::exp(x));
        return expq(static_cast<__float128>(x));
    } else {
        return boost::multiprecision::exp(mpfr_float(x));
    }
}

/// Gaussian elimination with complete pivoting. With complete pivoting the
/// pivots are the largest remaining entries, so their span in digits is the
/// dynamic range the elimination has to resolve: roundoff injected while
/// eliminating the large pivots limits the relative accuracy of the small
/// ones to about eps * (pivot span). Returns false when exactly singular.
template <typename Real>
bool eliminate(std::vector<Real>& a, int n, int& sign, double& log_det,
               double& log_span) {
    auto at = [&a, n](int i, int j) -> Real& { return a[static_cast<std::size_t>(i) * n + j]; };
    sign = 1;
    log_det = 0.0;
    double lp_max = -std::numeric_limits<double>::infinity();
    double lp_min = std::numeric_limits<double>::infinity();

    for (int step = 0; step < n; ++step) {
        int pi = step, pj = step;
        Real best(0);
        for (int i = step; i < n; ++i) {
            for (int j = step; j < n; ++j) {
                const Real v = at(i, j) < 0 ? Real(-at(i, j)) : at(i, j);
                if (v > best) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        }
        if (best == 0) return false;
        if (pi != step) {
            for (int j = 0; j < n; ++j) std::swap(at(pi, j), at(step, j));
            sign = -sign;
        }
        if (pj != step) {
            for (int i = 0; i < n; ++i) std::swap(at(i, pj), at(i, step));
            sign = -sign;
        }
        const Real pivot = at(step, step);
        if (pivot < 0) sign = -sign;
        const double lp = log_abs(pivot);
        log_det += lp;
        lp_max = std::max(lp_max, lp);
        lp_min = std::min(lp_min, lp);
        for (int i = step + 1; i < n; ++i) {
            const Real factor = at(i, step) / pivot;
            at(i, step) = 0;
            if (factor == 0) continue;
            for (int j = step + 1; j < n; ++j) at(i, j) -= factor * at(step, j);
        }
    }
    log_span = lp_max - lp_min;
    return true;
}

constexpr double kLog10 = 2.302585092994046;

template <typename Real>
bool run_elimination(const LogMatrix& m, const std::vector<double>& row_scale, int n,
                     int& sign, double& log_det, double& log_span) {
    std::vector<Real> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a[static_cast<std::size_t>(i) * n + j] =
                m.sign()(i, j) == 0
                    ? Real(0)
                    : Real(m.sign()(i, j)) * exp_of<Real>(m.logmag()(i, j) - row_scale[i]);
    return eliminate<Real>(a, n, sign, log_det, log_span);
}

}  // namespace

LogDetResult signed_log_det(const LogMatrix& m, double significance_floor, double rel_tol) {
    const int n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("determinant needs a square matrix");
    LogDetResult out;
    if (n == 0) {
        out.det = SignedLogValue::one();  // det of the empty matrix
        return out;
    }

    std::vector<double> row_scale(n);
    std::vector<double> col_max(n, -std::numeric_limits<double>::infinity());
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        double row_max = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (m.sign()(i, j) != 0) {
                row_max = std::max(row_max, m.logmag()(i, j));
                col_max[j] = std::max(col_max[j], m.logmag()(i, j));
            }
        }
        if (row_max == -std::numeric_limits<double>::infinity()) {
            out.det = SignedLogValue::zero();
            out.log_scale = -std::numeric_limits<double>::infinity();
            return out;  // zero row
        }
        row_scale[i] = row_max;
        scale += row_max;
    }
    out.log_scale = scale;

    // Every expansion term takes one entry per row AND per column, so the
    // sharper of the two Hadamard-style bounds applies; a determinant whose
    // value bound sits below the caller's significance floor is zero for
    // all practical purposes (deep density tails).
    double col_scale = 0.0;
    for (int j = 0; j < n; ++j) {
        if (col_max[j] == -std::numeric_limits<double>::infinity()) {
            out.det = SignedLogValue::zero();
            out.log_scale = -std::numeric_limits<double>::infinity();
            return out;  // zero column
        }
        col_scale += col_max[j];
    }
    if (std::min(scale, col_scale) + std::lgamma(n + 1.0) < significance_floor) {
        out.det = SignedLogValue::zero();
        return out;
    }

    // Precision ladder. Wishart-style matrices with widely spread mu-groups
    // grade the pivots over arbitrarily many digits; each level keeps ~9
    // digits of headroom and hands over to the next when the measured span
    // eats into that.
    // Digits a level may spend on the pivot span while still delivering
    // rel_tol, with ~1.5 guard digits.
    const double wanted = std::min(12.0, -std::log10(std::max(rel_tol, 1e-13)));
    const double double_span_limit = std::max(3.0, 15.3 - wanted - 1.5) * kLog10;
    const double quad_span_limit = std::max(16.0, 32.5 - wanted - 1.5) * kLog10;

    int sign = 0;
    double log_det = 0.0, log_span = 0.0;
    bool ok = run_elimination<double>(m, row_scale, n, sign, log_det, log_span);
    if (ok && log_span <= double_span_limit) {
        out.det = SignedLogValue::from_log(sign, log_det + scale);
        return out;
    }


    ok = run_elimination<__float128>(m, row_scale, n, sign, log_det, log_span);
    if (ok && log_span <= quad_span_limit) {
        out.det = SignedLogValue::from_log(sign, log_det + scale);
        return out;
    }

    double digits = std::max(50.0, log_span / kLog10 + 35.0);
    for (int attempt = 0; attempt < 4; ++attempt) {
        mpfr_float::default_precision(static_cast<unsigned>(digits));
        ok = run_elimination<mpfr_float>(m, row_scale, n, sign, log_det, log_span);
        if (ok && log_span / kLog10 <= digits - 25.0) break;
        if (!ok) break;  // exactly singular at this precision: accept zero below
        digits = log_span / kLog10 + 35.0;
    }
    if (!ok) {
        out.det = SignedLogValue::zero();
        return out;
    }
    out.det = SignedLogValue::from_log(sign, log_det + scale);
    return out;
}

MpElimResult mpfr_eliminate(std::vector<mpfr_float>& a, int n) {
    MpElimResult r;
    r.ok = eliminate<mpfr_float>(a, n, r.sign, r.log_det, r.log_span);
    return r;
}

}  // namespace mimocap::detail
