#pragma once

#include <boost/multiprecision/mpfr.hpp>

namespace mimocap::detail {

using mpfr_float = boost::multiprecision::mpfr_float;

/// int_0^inf x^m e^(-mu x) dx evaluated at the current MPFR default
/// precision.
mpfr_float hp_power_moment(int m, const mpfr_float& mu);

/// int_0^inf x^m e^(-mu x) ln(1+x) dx via the incomplete-gamma identity,
/// entirely in MPFR. The downward recurrence amplifies roundoff by roughly
/// mu^m / m!, which the caller should cover when choosing the precision.
mpfr_float hp_log_moment(int m, const mpfr_float& mu);

}  // namespace mimocap::detail
