#pragma once

#include <cmath>
#include <limits>

namespace mimocap {

/// A real number stored as (sign, log of absolute value).
///
/// Determinant constants such as products of factorials, eigenvalue powers
/// and Vandermonde factors overflow doubles long before the final capacity
/// or pdf value does, so all intermediate products are carried in this form
/// and exponentiated only at the end.
struct SignedLogValue {
    int sign = 0;  // -1, 0, +1
    double logmag = -std::numeric_limits<double>::infinity();

    static SignedLogValue zero() { return {}; }
    static SignedLogValue one() { return {1, 0.0}; }

    static SignedLogValue from_log(int sign, double logmag) {
        if (sign == 0 || logmag == -std::numeric_limits<double>::infinity())
            return zero();
        return {sign < 0 ? -1 : 1, logmag};
    }

    static SignedLogValue from_double(double x) {
        if (x == 0.0) return zero();
        return {x < 0 ? -1 : 1, std::log(std::abs(x))};
    }

    /// May overflow to +-inf or underflow to 0 when the magnitude leaves
    /// double range; that is the honest answer at this precision.
    double to_double() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(logmag);
    }

    bool is_zero() const { return sign == 0; }

    SignedLogValue abs() const { return {sign == 0 ? 0 : 1, logmag}; }
};

inline SignedLogValue operator*(const SignedLogValue& a, const SignedLogValue& b) {
    if (a.sign == 0 || b.sign == 0) return SignedLogValue::zero();
    return {a.sign * b.sign, a.logmag + b.logmag};
}

inline SignedLogValue operator/(const SignedLogValue& a, const SignedLogValue& b) {
    if (a.sign == 0) return SignedLogValue::zero();
    return {a.sign * b.sign, a.logmag - b.logmag};
}

inline SignedLogValue operator-(const SignedLogValue& a) {
    return {-a.sign, a.logmag};
}

/// Log-sum with sign resolution; exact cancellation yields zero().
inline SignedLogValue operator+(const SignedLogValue& a, const SignedLogValue& b) {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    const SignedLogValue& big = (a.logmag >= b.logmag) ? a : b;
    const SignedLogValue& small = (a.logmag >= b.logmag) ? b : a;
    const double d = small.logmag - big.logmag;  // <= 0
    if (a.sign == b.sign) {
        return {a.sign, big.logmag + std::log1p(std::exp(d))};
    }
    const double t = -std::expm1(d);  // 1 - exp(d), in [0, 1]
    if (t <= 0.0) return SignedLogValue::zero();
    return {big.sign, big.logmag + std::log(t)};
}

inline SignedLogValue operator-(const SignedLogValue& a, const SignedLogValue& b) {
    return a + (-b);
}

inline SignedLogValue& operator*=(SignedLogValue& a, const SignedLogValue& b) { return a = a * b; }
inline SignedLogValue& operator/=(SignedLogValue& a, const SignedLogValue& b) { return a = a / b; }
inline SignedLogValue& operator+=(SignedLogValue& a, const SignedLogValue& b) { return a = a + b; }

/// a^k for integer k (k < 0 allowed when a is nonzero).
inline SignedLogValue pow_int(const SignedLogValue& a, long k) {
    if (k == 0) return SignedLogValue::one();
    if (a.sign == 0) return SignedLogValue::zero();
    const int sign = (a.sign < 0 && (k % 2 != 0)) ? -1 : 1;
    return {sign, static_cast<double>(k) * a.logmag};
}

}  // namespace mimocap
