#include "mimocap/hypfun.hpp"

#include "logdet.hpp"
#include "mimocap/specfun.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mimocap {

namespace {

constexpr double kGapWarningThreshold = 1e-6;

using mpfr_float = boost::multiprecision::mpfr_float;

/// log Gamma_(m)(n) = log prod_{i=1}^m (n-i)!
double log_gamma_m(int m, int n) {
    double s = 0.0;
    for (int i = 1; i <= m; ++i) s += std::lgamma(n - i + 1.0);
    return s;
}

/// psi_q^{(m)}(b) = prod_{i=1}^m prod_j (b_j - i + 1)^(i-1), signed.
SignedLogValue psi_constant(std::span<const double> params, int m) {
    SignedLogValue out = SignedLogValue::one();
    for (int i = 1; i <= m; ++i) {
        for (double p : params) {
            out *= pow_int(SignedLogValue::from_double(p - i + 1.0), i - 1);
        }
    }
    return out;
}

/// prod_{i<j}(v_i - v_j) over the expanded (all multiplicity 1) values,
/// which must be sorted descending.
SignedLogValue vandermonde_product(std::span<const double> v) {
    SignedLogValue out = SignedLogValue::one();
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            out *= SignedLogValue::from_double(v[i] - v[j]);
    return out;
}

/// lambda^d as a signed-log factor.
SignedLogValue lambda_power(double lambda, int d) {
    if (d == 0) return SignedLogValue::one();
    if (lambda == 0.0) return SignedLogValue::zero();
    const int sign = (lambda < 0.0 && d % 2 != 0) ? -1 : 1;
    return SignedLogValue::from_log(sign, d * std::log(std::abs(lambda)));
}

/// Rising factorial (x)_k, signed.
SignedLogValue rising_factorial(double x, int k) {
    SignedLogValue out = SignedLogValue::one();
    for (int t = 0; t < k; ++t) out *= SignedLogValue::from_double(x + t);
    return out;
}

/// Falling factorial [x]_k = x (x-1) ... (x-k+1), signed.
SignedLogValue falling_factorial(double x, int k) {
    SignedLogValue out = SignedLogValue::one();
    for (int t = 0; t < k; ++t) out *= SignedLogValue::from_double(x - t);
    return out;
}

std::vector<double> sorted_distinct_lambdas(const EigenArgument& lambda_arg) {
    if (!lambda_arg.all_distinct())
        throw std::invalid_argument(
            "lambda-side eigenvalues must all have multiplicity 1; only the w side "
            "supports coincident eigenvalues");
    return lambda_arg.expanded();  // stored descending
}

void check_dimensions(const EigenArgument& lambda_arg, const EigenArgument& w_arg) {
    if (lambda_arg.dimension() != w_arg.dimension())
        throw std::invalid_argument("argument matrices must have equal dimension");
}

// ---- high-precision path ---------------------------------------------------
//
// Near-coincident distinct w values make the determinant cancel like the
// Vandermonde of their gaps, so entries carried at double precision lose the
// value long before the elimination does. For the built-in families the
// entries are recomputed in MPFR at a precision sized from the cluster
// structure, which keeps the distinct-eigenvalue path accurate arbitrarily
// close to the confluent limit.

struct FamilyParams {
    enum Kind { Exp, Binomial, Series } kind = Exp;
    double gamma = 0.0;                    // Binomial
    std::vector<double> a_shift, b_shift;  // Series (already shifted by 1-m)
};

/// Estimated decimal digits eaten by near-coincident distinct values
/// (sum over close pairs of L_a * L_b * log10(scale / gap)).
double cluster_cancellation_digits(const EigenArgument& w_arg) {
    const auto& groups = w_arg.groups();
    double scale = 1.0;
    for (const auto& [w, mult] : groups) scale = std::max(scale, std::abs(w));
    double lost = 0.0;
    for (std::size_t a = 0; a < groups.size(); ++a) {
        for (std::size_t b = a + 1; b < groups.size(); ++b) {
            const double gap = groups[a].first - groups[b].first;
            if (gap < 1e-2 * scale) {
                lost += groups[a].second * static_cast<double>(groups[b].second) *
                        std::log10(scale / gap);
            }
        }
    }
    return lost;
}

mpfr_float hp_pfq_series(const std::vector<double>& a, const std::vector<double>& b,
                         const mpfr_float& z, int digits) {
    mpfr_float term(1), sum(1);
    const mpfr_float eps = boost::multiprecision::pow(mpfr_float(10), -digits - 5);
    for (int k = 0; k < 20000; ++k) {
        mpfr_float num(1), den(1);
        for (double ai : a) num *= mpfr_float(ai) + k;
        for (double bi : b) den *= mpfr_float(bi) + k;
        if (num == 0) return sum;  // terminating series
        if (den == 0)
            throw std::domain_error("pFq hit a nonpositive-integer denominator parameter");
        term *= num / den * z / (k + 1);
        sum += term;
        if (boost::multiprecision::abs(term) <= eps * boost::multiprecision::abs(sum))
            return sum;
    }
    throw std::domain_error("scalar pFq series did not converge in the extended-precision path");
}

mpfr_float hp_entry(const FamilyParams& fam, double lambda, int order, double w, int digits) {
    const mpfr_float lam(lambda);
    const mpfr_float arg = lam * w;
    switch (fam.kind) {
        case FamilyParams::Exp:
            return boost::multiprecision::pow(lam, order) * boost::multiprecision::exp(arg);
        case FamilyParams::Binomial: {
            const mpfr_float base = 1 - arg;
            const double expo = fam.gamma - order;
            if (base == 0) throw std::domain_error("singular factor: 1 - lambda*w vanishes");
            mpfr_float powed;
            if (base > 0) {
                powed = boost::multiprecision::pow(base, mpfr_float(expo));
            } else {
                const double ip = std::round(expo);
                if (ip != expo)
                    throw std::domain_error(
                        "1F0 needs 1 - lambda*w > 0 for non-integer exponents");
                powed = boost::multiprecision::pow(-base, mpfr_float(expo));
                if (std::lround(ip) % 2 != 0) powed = -powed;
            }
            mpfr_float ff(1);  // [gamma]_order
            for (int t = 0; t < order; ++t) ff *= mpfr_float(fam.gamma) - t;
            const mpfr_float sign = (order % 2 == 0) ? mpfr_float(1) : mpfr_float(-1);
            return sign * boost::multiprecision::pow(lam, order) * ff * powed;
        }
        case FamilyParams::Series: {
            mpfr_float poch(1);
            for (double v : fam.a_shift)
                for (int t = 0; t < order; ++t) poch *= mpfr_float(v) + t;
            mpfr_float den(1);
            for (double v : fam.b_shift)
                for (int t = 0; t < order; ++t) den *= mpfr_float(v) + t;
            if (den == 0)
                throw std::domain_error(
                    "pFq derivative hits a nonpositive-integer b parameter");
            std::vector<double> an(fam.a_shift), bn(fam.b_shift);
            for (double& v : an) v += order;
            for (double& v : bn) v += order;
            return boost::multiprecision::pow(lam, order) * poch / den *
                   hp_pfq_series(an, bn, arg, digits);
        }
    }
    throw std::logic_error("unreachable family kind");
}

/// The Lemma-2 ratio (determinant over surviving Vandermonde factors and
/// group scalings) evaluated end to end in MPFR; reduced to signed-log form.
SignedLogValue hp_confluent_ratio(const FamilyParams& fam, std::span<const double> lambdas,
                                  const EigenArgument& w_arg) {
    const int m = static_cast<int>(lambdas.size());
    const int digits =
        std::min(300, 35 + static_cast<int>(std::ceil(cluster_cancellation_digits(w_arg))));
    mpfr_float::default_precision(static_cast<unsigned>(digits));

    std::vector<mpfr_float> a(static_cast<std::size_t>(m) * m);
    int col = 0;
    for (const auto& [w, mult] : w_arg.groups()) {
        for (int l = 1; l <= mult; ++l, ++col) {
            const int order = mult - l;
            for (int i = 0; i < m; ++i)
                a[static_cast<std::size_t>(i) * m + col] =
                    hp_entry(fam, lambdas[i], order, w, digits);
        }
    }

    auto at = [&a, m](int i, int j) -> mpfr_float& {
        return a[static_cast<std::size_t>(i) * m + j];
    };
    int sign = 1;
    double log_det = 0.0;
    for (int step = 0; step < m; ++step) {
        int pi = step, pj = step;
        mpfr_float best(0);
        for (int i = step; i < m; ++i) {
            for (int j = step; j < m; ++j) {
                const mpfr_float v = boost::multiprecision::abs(at(i, j));
                if (v > best) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        }
        if (best == 0) return SignedLogValue::zero();
        if (pi != step) {
            for (int j = 0; j < m; ++j) std::swap(at(pi, j), at(step, j));
            sign = -sign;
        }
        if (pj != step) {
            for (int i = 0; i < m; ++i) std::swap(at(i, pj), at(i, step));
            sign = -sign;
        }
        const mpfr_float pivot = at(step, step);
        if (pivot < 0) sign = -sign;
        log_det += static_cast<double>(
            boost::multiprecision::log(boost::multiprecision::abs(pivot)));
        for (int i = step + 1; i < m; ++i) {
            const mpfr_float factor = at(i, step) / pivot;
            at(i, step) = 0;
            if (factor == 0) continue;
            for (int j = step + 1; j < m; ++j) at(i, j) -= factor * at(step, j);
        }
    }

    mpfr_float den(1);
    const auto& groups = w_arg.groups();
    for (std::size_t ga = 0; ga < groups.size(); ++ga)
        for (std::size_t gb = ga + 1; gb < groups.size(); ++gb)
            den *= boost::multiprecision::pow(
                mpfr_float(groups[ga].first) - mpfr_float(groups[gb].first),
                groups[ga].second * groups[gb].second);
    double log_den = static_cast<double>(
        boost::multiprecision::log(boost::multiprecision::abs(den)));
    if (den < 0) sign = -sign;
    for (const auto& [w, mult] : groups) log_den += log_gamma_m(mult, mult);

    return SignedLogValue::from_log(sign, log_det - log_den);
}

/// Cluster cancellation beyond this many digits routes the evaluation
/// through the MPFR entries; double entries keep ~9 digits of headroom.
constexpr double kHpDigitThreshold = 5.0;

void maybe_warn_conditioning(const EigenArgument& w_arg, std::vector<std::string>* warnings) {
    if (warnings && w_arg.min_relative_gap() < kGapWarningThreshold) {
        warnings->push_back(
            "w eigenvalue gap below 1e-6 relative: evaluation is ill-conditioned; merge "
            "near-coincident values into a multiplicity group");
    }
}

/// Route to the MPFR path when the distinct-value cluster structure would
/// cost more digits than double entries can spare.
SignedLogValue family_ratio(const FamilyParams& fam, const DerivativeFamily& f,
                            std::span<const double> lambdas, const EigenArgument& w_arg,
                            std::vector<std::string>* warnings) {
    if (cluster_cancellation_digits(w_arg) > kHpDigitThreshold) {
        maybe_warn_conditioning(w_arg, warnings);
        return hp_confluent_ratio(fam, lambdas, w_arg);
    }
    return confluent_det_ratio(f, lambdas, w_arg, warnings);
}

}  // namespace

EigenArgument EigenArgument::from_values(std::span<const double> values) {
    std::vector<std::pair<double, int>> groups;
    groups.reserve(values.size());
    for (double v : values) groups.emplace_back(v, 1);
    return from_groups(std::move(groups));
}

EigenArgument EigenArgument::from_groups(std::vector<std::pair<double, int>> groups) {
    if (groups.empty()) throw std::invalid_argument("eigenvalue argument must be nonempty");
    for (const auto& [v, mult] : groups) {
        if (!std::isfinite(v)) throw std::domain_error("eigenvalue must be finite");
        if (mult < 1) throw std::domain_error("multiplicity must be >= 1");
    }
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 1; i < groups.size(); ++i) {
        if (groups[i - 1].first == groups[i].first)
            throw std::domain_error("group values must be distinct; merge multiplicities instead");
    }
    EigenArgument arg;
    arg.groups_ = std::move(groups);
    arg.m_ = 0;
    for (const auto& [v, mult] : arg.groups_) arg.m_ += mult;
    return arg;
}

bool EigenArgument::all_distinct() const {
    return std::all_of(groups_.begin(), groups_.end(),
                       [](const auto& g) { return g.second == 1; });
}

std::vector<double> EigenArgument::expanded() const {
    std::vector<double> out;
    out.reserve(m_);
    for (const auto& [v, mult] : groups_) out.insert(out.end(), mult, v);
    return out;
}

double EigenArgument::min_relative_gap() const {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < groups_.size(); ++i) {
        const double a = groups_[i - 1].first;
        const double b = groups_[i].first;
        const double scale = std::max(std::abs(a), std::abs(b));
        if (scale > 0.0) gap = std::min(gap, (a - b) / scale);
    }
    return gap;
}

SignedLogValue confluent_det_ratio(const DerivativeFamily& f,
                                   std::span<const double> lambdas,
                                   const EigenArgument& w_arg,
                                   std::vector<std::string>* warnings) {
    const int m = static_cast<int>(lambdas.size());
    if (m != w_arg.dimension())
        throw std::invalid_argument("need as many row functions as w eigenvalues");
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (lambdas[i] == lambdas[j])
                throw std::domain_error("lambda values must be pairwise distinct");

    maybe_warn_conditioning(w_arg, warnings);

    // Columns: per group of multiplicity L, derivative orders L-1, ..., 0.
    detail::LogMatrix mat(m, m);
    int col = 0;
    for (const auto& [w, mult] : w_arg.groups()) {
        for (int l = 1; l <= mult; ++l, ++col) {
            const int order = mult - l;
            for (int i = 0; i < m; ++i) mat.set(i, col, f(i, order, w));
        }
    }

    // Surviving Vandermonde factors (distinct pairs only, descending order
    // keeps every factor positive) and the per-group scaling Gamma_(L)(L).
    double log_den = 0.0;
    const auto& groups = w_arg.groups();
    for (std::size_t a = 0; a < groups.size(); ++a)
        for (std::size_t b = a + 1; b < groups.size(); ++b)
            log_den += static_cast<double>(groups[a].second) * groups[b].second *
                       std::log(groups[a].first - groups[b].first);
    for (const auto& [w, mult] : groups) log_den += log_gamma_m(mult, mult);

    const detail::LogDetResult det = detail::signed_log_det(mat);
    return det.det / SignedLogValue::from_log(1, log_den);
}

SignedLogValue hyp0F0(const EigenArgument& lambda_arg, const EigenArgument& w_arg,
                      std::vector<std::string>* warnings) {
    check_dimensions(lambda_arg, w_arg);
    const std::vector<double> lambda = sorted_distinct_lambdas(lambda_arg);
    const int m = static_cast<int>(lambda.size());

    const DerivativeFamily family = [&lambda](int i, int order, double w) {
        return lambda_power(lambda[i], order) *
               SignedLogValue::from_log(1, lambda[i] * w);
    };

    FamilyParams fam;
    fam.kind = FamilyParams::Exp;
    const SignedLogValue ratio = family_ratio(fam, family, lambda, w_arg, warnings);
    const SignedLogValue constant = SignedLogValue::from_log(1, log_gamma_m(m, m));
    return constant * ratio / vandermonde_product(lambda);
}

SignedLogValue hyp1F0(double r, const EigenArgument& lambda_arg, const EigenArgument& w_arg,
                      std::vector<std::string>* warnings) {
    check_dimensions(lambda_arg, w_arg);
    const std::vector<double> lambda = sorted_distinct_lambdas(lambda_arg);
    const int m = static_cast<int>(lambda.size());
    const double gamma = m - r - 1.0;

    for (double l : lambda)
        for (const auto& [w, mult] : w_arg.groups())
            if (1.0 - l * w == 0.0)
                throw std::domain_error("singular factor: 1 - lambda*w vanishes");

    const DerivativeFamily family = [&lambda, gamma](int i, int order, double w) {
        // d^n/dw^n (1 - lambda w)^gamma = (-lambda)^n [gamma]_n (1-lambda w)^(gamma-n)
        const double base = 1.0 - lambda[i] * w;
        const double expo = gamma - order;
        SignedLogValue b;
        if (base > 0.0) {
            b = SignedLogValue::from_log(1, expo * std::log(base));
        } else {
            const double ip = std::round(expo);
            if (ip != expo)
                throw std::domain_error(
                    "1F0 needs 1 - lambda*w > 0 for non-integer exponents");
            b = SignedLogValue::from_log(std::lround(ip) % 2 == 0 ? 1 : -1,
                                         expo * std::log(-base));
        }
        SignedLogValue sign_part = (order % 2 == 0) ? SignedLogValue::one()
                                                    : -SignedLogValue::one();
        return sign_part * lambda_power(lambda[i], order) *
               falling_factorial(gamma, order) * b;
    };

    const SignedLogValue psi1 = psi_constant(std::span<const double>(&r, 1), m);
    if (psi1.is_zero())
        throw std::domain_error("1F0 determinant representation degenerates: psi_1(r) = 0");

    FamilyParams fam;
    fam.kind = FamilyParams::Binomial;
    fam.gamma = gamma;
    const SignedLogValue ratio = family_ratio(fam, family, lambda, w_arg, warnings);
    const SignedLogValue constant = SignedLogValue::from_log(1, log_gamma_m(m, m)) / psi1;
    return constant * ratio / vandermonde_product(lambda);
}

SignedLogValue hyp_pFq(std::span<const double> a, std::span<const double> b,
                       const EigenArgument& lambda_arg, const EigenArgument& w_arg,
                       std::vector<std::string>* warnings) {
    check_dimensions(lambda_arg, w_arg);
    const std::vector<double> lambda = sorted_distinct_lambdas(lambda_arg);
    const int m = static_cast<int>(lambda.size());

    std::vector<double> a_shift(a.begin(), a.end());
    std::vector<double> b_shift(b.begin(), b.end());
    for (double& v : a_shift) v += 1.0 - m;
    for (double& v : b_shift) v += 1.0 - m;

    const DerivativeFamily family = [&](int i, int order, double w) {
        // d^n/dz^n pFq(a~; b~; z) carries the Pochhammer ratio and shifts
        // every parameter by n; the chain rule adds lambda^n.
        SignedLogValue poch = SignedLogValue::one();
        for (double v : a_shift) poch *= rising_factorial(v, order);
        SignedLogValue den = SignedLogValue::one();
        for (double v : b_shift) den *= rising_factorial(v, order);
        if (den.is_zero())
            throw std::domain_error("pFq derivative hits a nonpositive-integer b parameter");
        std::vector<double> an(a_shift);
        std::vector<double> bn(b_shift);
        for (double& v : an) v += order;
        for (double& v : bn) v += order;
        const SeriesResult s = scalar_pFq(an, bn, lambda[i] * w);
        if (!s.converged)
            throw std::domain_error("scalar pFq series did not converge for element argument " +
                                    std::to_string(lambda[i] * w));
        return lambda_power(lambda[i], order) * poch / den *
               SignedLogValue::from_double(s.value);
    };

    const SignedLogValue psi_b = psi_constant(b, m);
    const SignedLogValue psi_a = psi_constant(a, m);
    if (psi_a.is_zero())
        throw std::domain_error("pFq determinant representation degenerates: psi_p(a) = 0");

    FamilyParams fam;
    fam.kind = FamilyParams::Series;
    fam.a_shift = a_shift;
    fam.b_shift = b_shift;
    const SignedLogValue ratio = family_ratio(fam, family, lambda, w_arg, warnings);
    const SignedLogValue constant =
        SignedLogValue::from_log(1, log_gamma_m(m, m)) * psi_b / psi_a;
    return constant * ratio / vandermonde_product(lambda);
}

}  // namespace mimocap
