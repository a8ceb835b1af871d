#include "mimocap/verify.hpp"

#include "mimocap/capacity.hpp"
#include "mimocap/covariance.hpp"
#include "mimocap/csv.hpp"
#include "mimocap/eigpdf.hpp"
#include "mimocap/hypfun.hpp"
#include "mimocap/quadrature.hpp"
#include "mimocap/rng.hpp"
#include "mimocap/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace mimocap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct McCase {
    const char* tag;
    int p;
    std::vector<EigenGroup> groups;
};

// n, p drawn from {1,2,3,4,6}; multiplicity patterns cover all-distinct,
// all-equal and mixed.
const std::vector<McCase>& mc_grid() {
    static const std::vector<McCase> cases = {
        {"n1p1-equal", 1, {{1.0, 1}}},
        {"n2p2-distinct", 2, {{1.5, 1}, {0.6, 1}}},
        {"n2p1-equal", 1, {{1.0, 2}}},
        {"n2p3-equal", 3, {{0.8, 2}}},
        {"n3p2-mixed", 2, {{1.2, 2}, {0.5, 1}}},
        {"n3p3-distinct", 3, {{2.0, 1}, {1.0, 1}, {0.4, 1}}},
        {"n3p4-equal", 4, {{0.7, 3}}},
        {"n4p2-mixed", 2, {{1.5, 2}, {0.6, 2}}},
        {"n4p4-mixed", 4, {{2.0, 1}, {0.9, 3}}},
        {"n4p6-distinct", 6, {{2.4, 1}, {1.2, 1}, {0.8, 1}, {0.3, 1}}},
        {"n6p3-mixed", 3, {{1.8, 3}, {0.75, 3}}},
        {"n6p6-mixed", 6, {{2.2, 2}, {1.0, 2}, {0.45, 2}}},
    };
    return cases;
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace

CheckResult check_capacity_vs_mc(long samples, std::uint64_t seed, bool reduced_grid) {
    CheckResult r;
    r.name = reduced_grid ? "capacity.mc-grid-nmin2" : "capacity.mc-grid";
    r.tolerance = 1.0;  // |closed - mc| measured in units of 3*stderr
    r.pass = true;
    double worst = 0.0;
    for (const auto& c : mc_grid()) {
        const CovarianceSpec spec = CovarianceSpec::from_groups(c.groups);
        const int n_min = std::min(spec.dimension(), c.p);
        if (reduced_grid && n_min > 2) continue;
        const CapacityResult closed = capacity_su(spec, c.p);
        const MonteCarloEstimate mc = mc_capacity(spec, c.p, samples, seed);
        const double z = std::abs(closed.value_nats - mc.mean) / (3.0 * mc.std_error);
        if (z > worst) {
            worst = z;
            r.detail = std::string(c.tag) + ": closed=" + format_double(closed.value_nats) +
                       " mc=" + format_double(mc.mean) +
                       " stderr=" + format_double(mc.std_error) + " (nats)";
        }
    }
    r.measured = worst;
    r.pass = worst <= r.tolerance;
    return r;
}

namespace {

struct ConfluenceInstance {
    EigenArgument lambda;
    EigenArgument w_confluent;
    std::vector<std::pair<double, int>> w_groups;  // descending
    std::size_t split_group;                       // group carrying multiplicity > 1
};

/// Random instance with one multiplicity-2 or -3 group among distinct
/// values; argument ranges keep every 1F0 / 2F1 element inside its
/// convergence region (lambda*w in (-1, 0)).
ConfluenceInstance draw_instance(CounterRng& rng, int which) {
    const int mult = which % 2 == 0 ? 2 : 3;
    const int extra = 2;  // distinct w's beside the coincident group
    const int m = mult + extra;

    std::vector<double> lambda(m);
    for (int i = 0; i < m; ++i) lambda[i] = 0.15 + 0.8 * (i + rng.next_unit()) / m;

    std::vector<std::pair<double, int>> w_groups;
    // Separated by construction: slots 0.15 wide with 0.25 spacing.
    double base = -0.95;
    std::vector<double> values(extra + 1);
    for (int g = 0; g < extra + 1; ++g) {
        values[g] = base + 0.15 * rng.next_unit();
        base += 0.28;
    }
    const std::size_t split = rng.next_u64() % (extra + 1);
    for (int g = 0; g < extra + 1; ++g)
        w_groups.emplace_back(values[g], g == static_cast<int>(split) ? mult : 1);

    ConfluenceInstance inst{EigenArgument::from_values(lambda),
                            EigenArgument::from_groups(w_groups), w_groups, 0};
    std::sort(inst.w_groups.begin(), inst.w_groups.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t g = 0; g < inst.w_groups.size(); ++g)
        if (inst.w_groups[g].second > 1) inst.split_group = g;
    return inst;
}

EigenArgument split_group(const ConfluenceInstance& inst, double eps) {
    std::vector<std::pair<double, int>> groups;
    for (std::size_t g = 0; g < inst.w_groups.size(); ++g) {
        if (g == inst.split_group) {
            for (int t = 0; t < inst.w_groups[g].second; ++t)
                groups.emplace_back(inst.w_groups[g].first - t * eps, 1);
        } else {
            groups.push_back(inst.w_groups[g]);
        }
    }
    return EigenArgument::from_groups(std::move(groups));
}

}  // namespace

std::vector<CheckResult> check_confluence_continuity(int instances, std::uint64_t seed) {
    const double eps1 = 1e-3, eps2 = 1e-4;
    const std::vector<double> a2f1 = {1.3, 0.7};
    const std::vector<double> b2f1 = {2.6};
    const double r1f0 = -0.8;

    std::vector<CheckResult> out;
    for (int family = 0; family < 3; ++family) {
        CheckResult r;
        r.name = family == 0   ? "confluence.hyp0F0"
                 : family == 1 ? "confluence.hyp1F0"
                               : "confluence.hyp_pFq";
        r.tolerance = 1e-6;
        double worst = 0.0;
        for (int inst_i = 0; inst_i < instances; ++inst_i) {
            CounterRng rng(seed, static_cast<std::uint64_t>(family * 10007 + inst_i));
            const ConfluenceInstance inst = draw_instance(rng, inst_i);
            const auto eval = [&](const EigenArgument& w) {
                switch (family) {
                    case 0: return hyp0F0(inst.lambda, w).to_double();
                    case 1: return hyp1F0(r1f0, inst.lambda, w).to_double();
                    default: return hyp_pFq(a2f1, b2f1, inst.lambda, w).to_double();
                }
            };
            const double exact = eval(inst.w_confluent);
            const double f1 = eval(split_group(inst, eps1));
            const double f2 = eval(split_group(inst, eps2));
            // One-step Richardson for the O(eps) error of the one-sided split.
            const double extrapolated = (10.0 * f2 - f1) / 9.0;
            worst = std::max(worst, rel_err(extrapolated, exact));
        }
        r.measured = worst;
        r.pass = worst <= r.tolerance;
        r.detail = std::to_string(instances) + " randomized instances, eps {1e-3, 1e-4}";
        out.push_back(std::move(r));
    }
    return out;
}

CheckResult check_pdf_normalization(bool reduced_grid, int quadrature_depth) {
    struct Pattern {
        const char* tag;
        int p;
        std::vector<EigenGroup> groups;
    };
    const std::vector<Pattern> patterns = {
        {"n1p1", 1, {{1.0, 1}}},
        {"n2p2-distinct", 2, {{1.0, 1}, {0.5, 1}}},
        {"n2p3-equal", 3, {{0.8, 2}}},
        {"n3p2-mixed", 2, {{1.0, 2}, {0.5, 1}}},
        {"n3p3-distinct", 3, {{1.5, 1}, {0.8, 1}, {0.4, 1}}},
        {"n4p3-mixed", 3, {{1.0, 2}, {0.5, 2}}},
    };
    CheckResult r;
    r.name = reduced_grid ? "pdf.normalization-nmin2" : "pdf.normalization";
    r.tolerance = 1e-4;
    double worst = 0.0;
    for (const auto& pat : patterns) {
        const CovarianceSpec spec = CovarianceSpec::from_groups(pat.groups);
        const int n_min = std::min(spec.dimension(), pat.p);
        if (reduced_grid && n_min > 2) continue;
        const EigenvaluePdf pdf(spec, pat.p);
        const NormalizationReport rep = normalization_check(pdf, quadrature_depth);
        const double err = std::abs(rep.value - 1.0);
        if (err > worst) {
            worst = err;
            r.detail = std::string(pat.tag) + ": integral=" + format_double(rep.value);
        }
    }
    r.measured = worst;
    r.pass = worst <= r.tolerance;
    return r;
}

CheckResult check_det_integral_identity() {
    CheckResult r;
    r.name = "detintegral.vs-quadrature";
    r.tolerance = 1e-4;

    double worst = 0.0;
    // p = 2, n = 2: polynomial x exponential rows over a finite box.
    {
        DetIntegralSpec spec;
        spec.phi = {[](double) { return 1.0; }, [](double x) { return x; }};
        spec.psi = {[](double x) { return std::exp(-x); },
                    [](double x) { return std::exp(-2.0 * x); }};
        spec.xi = [](double x) { return std::exp(-0.5 * x); };
        spec.xi_tilde = [](double x) { return std::log1p(x); };
        spec.lower = 0.0;
        spec.upper = 3.0;
        const double got = det_integral_identity(spec);

        const auto integrand = [&](double x1, double x2) {
            const double det_phi = spec.phi[0](x1) * spec.phi[1](x2) -
                                   spec.phi[0](x2) * spec.phi[1](x1);
            const double det_psi = spec.psi[0](x1) * spec.psi[1](x2) -
                                   spec.psi[0](x2) * spec.psi[1](x1);
            return det_phi * det_psi * spec.xi(x1) * spec.xi(x2) *
                   (spec.xi_tilde(x1) + spec.xi_tilde(x2));
        };
        const double want =
            integrate(
                [&](double x1) {
                    return integrate([&](double x2) { return integrand(x1, x2); }, 0.0, x1,
                                     1e-10, 14)
                        .value;
                },
                0.0, 3.0, 1e-9, 14)
                .value;
        worst = std::max(worst, rel_err(got, want));
    }
    // p = 2, n = 3 with one constant tail column, semi-infinite domain.
    {
        DetIntegralSpec spec;
        spec.phi = {[](double) { return 1.0; }, [](double x) { return x; }};
        spec.psi = {[](double x) { return std::exp(-x); },
                    [](double x) { return x * std::exp(-x); },
                    [](double x) { return std::exp(-3.0 * x); }};
        spec.psi_const = {{1.0}, {0.5}, {2.0}};
        spec.xi = [](double x) { return std::exp(-0.25 * x); };
        spec.xi_tilde = [](double x) { return std::log1p(x); };
        spec.lower = 0.0;
        spec.upper = kInf;
        const double got = det_integral_identity(spec);

        const auto det3 = [&](double x1, double x2) {
            // columns: psi_i(x1), psi_i(x2), const_i
            double m[3][3];
            for (int i = 0; i < 3; ++i) {
                m[i][0] = spec.psi[static_cast<std::size_t>(i)](x1);
                m[i][1] = spec.psi[static_cast<std::size_t>(i)](x2);
                m[i][2] = spec.psi_const[static_cast<std::size_t>(i)][0];
            }
            return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        };
        const auto integrand = [&](double x1, double x2) {
            const double det_phi = x2 - x1;
            return det_phi * det3(x1, x2) * spec.xi(x1) * spec.xi(x2) *
                   (spec.xi_tilde(x1) + spec.xi_tilde(x2));
        };
        const double want =
            integrate(
                [&](double x1) {
                    return integrate([&](double x2) { return integrand(x1, x2); }, 0.0, x1,
                                     1e-10, 14)
                        .value;
                },
                0.0, kInf, 1e-9, 14)
                .value;
        worst = std::max(worst, rel_err(got, want));
    }
    r.measured = worst;
    r.pass = worst <= r.tolerance;
    r.detail = "p=2, n in {2,3} families vs nested ordered-domain quadrature";
    return r;
}

CheckResult check_special_functions() {
    CheckResult r;
    r.name = "specfun.vs-quadrature";
    r.tolerance = 1.0;  // measured as error / per-family bound

    // Gamma(a, x) downward recurrence vs direct quadrature, bound 1e-8.
    double worst_gamma = 0.0;
    for (int a = -10; a <= 1; ++a) {
        for (double x : {0.01, 0.1, 1.0, 10.0}) {
            const double got = upper_incomplete_gamma(a, x);
            const double want =
                integrate(
                    [a](double t) { return std::pow(t, a - 1.0) * std::exp(-t); }, x, kInf,
                    1e-13, 15)
                    .value;
            worst_gamma = std::max(worst_gamma, rel_err(got, want));
        }
    }

    // Closed-form log moment vs quadrature, bound 1e-9, m <= 10, mu in [0.05, 50].
    double worst_lm = 0.0;
    for (int m = 0; m <= 10; ++m) {
        for (double mu : {0.05, 0.2, 1.0, 5.0, 20.0, 50.0}) {
            const double got = log_moment_integral(m, mu);
            const double want =
                integrate(
                    [m, mu](double x) {
                        return (m == 0 ? 1.0 : std::pow(x, m)) * std::exp(-mu * x) *
                               std::log1p(x);
                    },
                    0.0, kInf, 1e-13, 15)
                    .value;
            worst_lm = std::max(worst_lm, rel_err(got, want));
        }
    }

    r.measured = std::max(worst_gamma / 1e-8, worst_lm / 1e-9);
    r.pass = r.measured <= r.tolerance;
    r.detail = "gamma recurrence err=" + format_double(worst_gamma) +
               " (bound 1e-8); log-moment err=" + format_double(worst_lm) + " (bound 1e-9)";
    return r;
}

std::vector<CheckResult> run_verify(VerifyDepth depth, std::uint64_t seed) {
    std::vector<CheckResult> results;
    results.push_back(check_special_functions());
    const int instances = depth == VerifyDepth::Quick ? 5 : 20;
    for (auto& c : check_confluence_continuity(instances, seed)) results.push_back(c);
    results.push_back(
        check_pdf_normalization(depth == VerifyDepth::Quick, depth == VerifyDepth::Quick ? 8 : 10));
    results.push_back(check_det_integral_identity());
    if (depth == VerifyDepth::Quick) {
        results.push_back(check_capacity_vs_mc(100000, seed, true));
    } else {
        results.push_back(check_capacity_vs_mc(1000000, seed, false));
    }
    return results;
}

int write_verify_report(const std::vector<CheckResult>& results, std::ostream& out) {
    int failures = 0;
    for (const auto& r : results) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
            << " measured=" << format_double(r.measured)
            << " tolerance=" << format_double(r.tolerance);
        if (!r.detail.empty()) out << " | " << r.detail;
        out << "\n";
        if (!r.pass) ++failures;
    }
    out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
        << "\n";
    return failures;
}

}  // namespace mimocap
