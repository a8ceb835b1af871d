#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace mimocap {

enum class VerifyDepth { Quick, Full };

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;   // worst observed error / discrepancy
    double tolerance = 0.0;  // pinned bound it is compared against
    std::string detail;
};

/// Cross-validation suites: special-function recurrence vs quadrature,
/// confluence continuity vs perturbed-distinct evaluations, joint-pdf
/// normalization, closed-form capacity vs Monte Carlo, and the
/// determinant-integral identity vs nested quadrature.
///
/// Quick runs reduced grids and sample counts; Full runs the complete
/// 12-case Monte Carlo grid at 1e6 samples each. Deterministic per seed.
std::vector<CheckResult> run_verify(VerifyDepth depth, std::uint64_t seed);

/// One line per check, stable formatting; returns the number of failures.
int write_verify_report(const std::vector<CheckResult>& results, std::ostream& out);

// Individual suites (used by run_verify and by the acceptance tests, which
// pin their own parameters).

/// Capacity closed form vs Monte Carlo over the 12-case (n, p, multiplicity
/// pattern) grid; measured = max |closed - mc| / (3 * stderr).
CheckResult check_capacity_vs_mc(long samples, std::uint64_t seed, bool reduced_grid);

/// Confluent vs Richardson-extrapolated distinct evaluations for
/// hyp0F0 / hyp1F0 / hyp_pFq; measured = worst relative error.
std::vector<CheckResult> check_confluence_continuity(int instances, std::uint64_t seed);

/// Joint-pdf normalization over the n_min <= 3 pattern set;
/// measured = worst |integral - 1|.
CheckResult check_pdf_normalization(bool reduced_grid, int quadrature_depth);

/// Appendix-style determinant-integral identity vs nested quadrature.
CheckResult check_det_integral_identity();

/// Incomplete-gamma recurrence and closed-form moments vs quadrature.
CheckResult check_special_functions();

}  // namespace mimocap
