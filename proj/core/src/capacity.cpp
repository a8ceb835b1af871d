#include "mimocap/capacity.hpp"

#include "logdet.hpp"
#include "mimocap/quadrature.hpp"
#include "mimocap/rng.hpp"
#include "mimocap/specfun.hpp"
#include "specfun_hp.hpp"
#include "wishart_structure.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mimocap {

namespace {

constexpr double kLn2 = 0.6931471805599453094;
constexpr double kDetSpreadWarnLog = 27.631021115928547;   // ln(1e12)
constexpr double kSignNoiseFloorLog = -23.025850929940457;  // ln(1e-10)
constexpr double kMuGapWarnRel = 1e-6;
constexpr std::uint64_t kFallbackSeed = 271828;
constexpr long kFallbackSamples = 100000;

CapacityResult from_nats(double nats, CapacityDiagnostics diag = {}) {
    CapacityResult r;
    r.value_nats = nats;
    r.value_bits = nats / kLn2;
    r.diagnostics = std::move(diag);
    return r;
}

/// Decimal digits the capacity determinants cancel due to clustered mu
/// groups: each close pair (mu_i, mu_j) contributes roughly
/// m_i m_j log10(scale/gap), mirroring the (mu_i - mu_j)^(m_i m_j) factor
/// of the normalization constant.
double mu_cluster_digits(const detail::WishartStructure& s) {
    double lost = 0.0;
    for (std::size_t i = 0; i < s.mu.size(); ++i) {
        for (std::size_t j = i + 1; j < s.mu.size(); ++j) {
            const double gap = s.mu[i] - s.mu[j];
            const double scale = s.mu[i];
            if (gap < scale)
                lost += s.mult[i] * static_cast<double>(s.mult[j]) * std::log10(scale / gap);
        }
    }
    return lost;
}

using detail::mpfr_float;

/// Determinant sum of the capacity formula with entries recomputed in MPFR.
/// Needed when mu groups nearly coincide: the cancellation then runs far
/// beyond what double-precision moment values can feed, no matter how the
/// elimination itself is done. Precision is iterated on the measured pivot
/// span until enough headroom remains.
SignedLogValue hp_capacity_det_sum(const detail::WishartStructure& s, double cluster_digits,
                                   std::vector<double>* det_logs) {
    const int n = s.n;
    const int n_min = s.n_min;
    const int p = s.p;
    const int groups = static_cast<int>(s.mu.size());
    int d_max = 0;
    for (int m : s.mult) d_max = std::max(d_max, m - 1);
    const int e_max = (p - n_min) + (n_min - 1) + d_max;

    // the downward gamma recurrence amplifies by ~mu^m/m! for mu > 1
    double amp_digits = 0.0;
    for (int g = 0; g < groups; ++g) {
        if (s.mu[g] > 1.0)
            amp_digits = std::max(amp_digits, e_max * std::log10(s.mu[g]) -
                                                  std::lgamma(e_max + 1.0) / 2.302585092994046);
    }

    double digits = std::min(400.0, 40.0 + 1.5 * cluster_digits);
    for (int attempt = 0; attempt < 4; ++attempt) {
        mpfr_float::default_precision(
            static_cast<unsigned>(digits + std::max(0.0, amp_digits) + 10));

        std::vector<std::vector<mpfr_float>> pm(groups), lm(groups);
        for (int g = 0; g < groups; ++g) {
            const mpfr_float mu(s.mu[g]);
            pm[g].resize(e_max + 1);
            lm[g].resize(e_max + 1);
            for (int e = 0; e <= e_max; ++e) {
                pm[g][e] = detail::hp_power_moment(e, mu);
                lm[g][e] = detail::hp_log_moment(e, mu);
            }
        }

        std::vector<mpfr_float> base(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i) {
            const int g = s.index.group[i];
            const int d = s.index.derivative[i];
            const int sign = d % 2 == 0 ? 1 : -1;
            for (int col = 1; col <= n_min; ++col) {
                const int e = p - n_min + col - 1 + d;
                base[static_cast<std::size_t>(i) * n + col - 1] = sign * pm[g][e];
            }
            for (int col = n_min + 1; col <= n; ++col) {
                const int a = n - col;
                mpfr_float ff(1);
                for (int t = 0; t < d; ++t) ff *= a - t;
                base[static_cast<std::size_t>(i) * n + col - 1] =
                    (d > a) ? mpfr_float(0)
                            : ff * boost::multiprecision::pow(mpfr_float(s.mu[g]), a - d);
            }
        }

        SignedLogValue sum = SignedLogValue::zero();
        std::vector<double> logs;
        double worst_span = 0.0;
        bool singular = false;
        for (int k = 1; k <= n_min; ++k) {
            std::vector<mpfr_float> a = base;
            for (int i = 0; i < n; ++i) {
                const int g = s.index.group[i];
                const int d = s.index.derivative[i];
                const int sign = d % 2 == 0 ? 1 : -1;
                const int e = p - n_min + k - 1 + d;
                a[static_cast<std::size_t>(i) * n + k - 1] = sign * lm[g][e];
            }
            const detail::MpElimResult det = detail::mpfr_eliminate(a, n);
            if (!det.ok) {
                singular = true;
                break;
            }
            worst_span = std::max(worst_span, det.log_span);
            logs.push_back(det.log_det);
            sum += SignedLogValue::from_log(det.sign, det.log_det);
        }
        if (!singular && worst_span / 2.302585092994046 <= digits - 25.0) {
            if (det_logs) *det_logs = std::move(logs);
            return sum;
        }
        digits = singular ? std::min(500.0, digits * 2.0)
                          : std::min(500.0, worst_span / 2.302585092994046 + 35.0);
    }
    throw std::logic_error("capacity determinants did not stabilize at extended precision");
}

}  // namespace

CapacityResult capacity_su(const CovarianceSpec& spec, int p) {
    if (spec.is_empty()) return from_nats(0.0);

    const detail::WishartStructure s = detail::make_wishart_structure(spec, p);
    const int n = s.n;
    const int n_min = s.n_min;
    const int groups = static_cast<int>(s.mu.size());

    CapacityDiagnostics diag;
    diag.n_min = n_min;

    SignedLogValue sum = SignedLogValue::zero();
    const double cluster_digits = mu_cluster_digits(s);
    if (cluster_digits > 5.0) {
        // near-coincident mu groups: double-precision moment entries cannot
        // feed the cancellation, recompute everything in MPFR
        sum = hp_capacity_det_sum(s, cluster_digits, &diag.det_log_magnitudes);
    } else {
        // Element integrals repeat across the n_min determinants (only
        // column k swaps in the log weight), so precompute per
        // (group, exponent).
        int d_max = 0;
        for (int m : s.mult) d_max = std::max(d_max, m - 1);
        const int e_max = (p - n_min) + (n_min - 1) + d_max;
        std::vector<std::vector<double>> log_pm(groups), log_lm(groups);
        for (int g = 0; g < groups; ++g) {
            log_pm[g].resize(e_max + 1);
            log_lm[g].resize(e_max + 1);
            for (int e = 0; e <= e_max; ++e) {
                log_pm[g][e] = power_moment_integral_log(e, s.mu[g]);
                log_lm[g][e] = log_moment_integral_log(e, s.mu[g]);
            }
        }

        for (int k = 1; k <= n_min; ++k) {
            detail::LogMatrix r(n, n);
            for (int i = 0; i < n; ++i) {
                const int g = s.index.group[i];
                const int d = s.index.derivative[i];
                const int sign = d % 2 == 0 ? 1 : -1;  // (-1)^{d_i} of the integral rows
                for (int col = 1; col <= n_min; ++col) {
                    const int e = p - n_min + col - 1 + d;
                    const double lm = (col == k) ? log_lm[g][e] : log_pm[g][e];
                    r.set(i, col - 1, SignedLogValue::from_log(sign, lm));
                }
                for (int col = n_min + 1; col <= n; ++col) {
                    r.set(i, col - 1, detail::power_column_entry(n, col, d, s.mu[g]));
                }
            }
            const detail::LogDetResult det = detail::signed_log_det(r);
            diag.det_log_magnitudes.push_back(det.det.logmag);
            sum += det.det;
        }
    }
    double det_log_min = std::numeric_limits<double>::infinity();
    double det_log_max = -std::numeric_limits<double>::infinity();
    for (double lm : diag.det_log_magnitudes) {
        det_log_min = std::min(det_log_min, lm);
        det_log_max = std::max(det_log_max, lm);
    }

    if (s.min_mu_gap < kMuGapWarnRel) {
        diag.warnings.push_back(
            "normalization constant is ill-conditioned: mu-group gap below 1e-6 relative; "
            "merge near-coincident eigenvalues");
    }
    if (n_min > 1 && det_log_max - det_log_min > kDetSpreadWarnLog) {
        diag.warnings.push_back(
            "determinant magnitudes spread beyond 1e12: closed form may lose digits");
    }
    if (!diag.warnings.empty()) {
        diag.mc_fallback = mc_capacity(spec, p, kFallbackSamples, kFallbackSeed);
    }

    const SignedLogValue value = s.constant * sum;
    if (value.sign <= 0) {
        if (value.sign < 0 &&
            value.logmag - (s.constant.logmag + det_log_max) > kSignNoiseFloorLog) {
            throw std::logic_error(
                "capacity evaluated negative beyond noise level (n=" + std::to_string(n) +
                ", p=" + std::to_string(p) + ")");
        }
        return from_nats(0.0, std::move(diag));
    }
    return from_nats(std::exp(value.logmag), std::move(diag));
}

CapacityResult capacity_mu(const NetworkScenario& scenario) {
    scenario.validate();
    const InterferenceMatrices m = build_interference_matrices(scenario);
    CapacityResult with_all = capacity_su(m.psi_tilde, scenario.receive_antennas);
    if (m.psi.is_empty()) return with_all;  // no interferers: exactly single-user

    CapacityResult interference_only = capacity_su(m.psi, scenario.receive_antennas);
    double nats = with_all.value_nats - interference_only.value_nats;
    if (nats < 0.0) {
        const double tol = 1e-9 * std::max(1.0, with_all.value_nats);
        if (-nats > tol)
            throw std::logic_error("multiuser mutual information evaluated negative: " +
                                   std::to_string(nats) + " nats");
        nats = 0.0;
    }

    CapacityDiagnostics diag;
    diag.n_min = with_all.diagnostics.n_min;
    diag.det_log_magnitudes = with_all.diagnostics.det_log_magnitudes;
    diag.warnings = with_all.diagnostics.warnings;
    diag.warnings.insert(diag.warnings.end(), interference_only.diagnostics.warnings.begin(),
                         interference_only.diagnostics.warnings.end());
    if (with_all.diagnostics.mc_fallback || interference_only.diagnostics.mc_fallback) {
        const MonteCarloEstimate a =
            with_all.diagnostics.mc_fallback
                ? *with_all.diagnostics.mc_fallback
                : mc_capacity(m.psi_tilde, scenario.receive_antennas, kFallbackSamples,
                              kFallbackSeed);
        const MonteCarloEstimate b =
            interference_only.diagnostics.mc_fallback
                ? *interference_only.diagnostics.mc_fallback
                : mc_capacity(m.psi, scenario.receive_antennas, kFallbackSamples,
                              kFallbackSeed);
        MonteCarloEstimate d;
        d.mean = a.mean - b.mean;
        d.std_error = std::hypot(a.std_error, b.std_error);
        d.samples = std::min(a.samples, b.samples);
        d.seed = a.seed;
        diag.mc_fallback = d;
    }
    return from_nats(nats, std::move(diag));
}

CapacityResult capacity_gaussian_approx(const NetworkScenario& scenario) {
    scenario.validate();
    const double effective_noise = scenario.noise_power + scenario.total_interference_power();
    const double rho0 = scenario.users[0].power / (scenario.users[0].antennas * effective_noise);
    const CovarianceSpec phi =
        CovarianceSpec::from_groups({{rho0, scenario.users[0].antennas}});
    return capacity_su(phi, scenario.receive_antennas);
}

CapacityResult relay_upper_bound(const CovarianceSpec& spec, int p) {
    CapacityResult r = capacity_su(spec, p);
    r.value_nats *= 0.5;
    r.value_bits *= 0.5;
    if (r.diagnostics.mc_fallback) {
        r.diagnostics.mc_fallback->mean *= 0.5;
        r.diagnostics.mc_fallback->std_error *= 0.5;
    }
    return r;
}

MonteCarloEstimate mc_capacity(const CovarianceSpec& spec, int p, long samples,
                               std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("sample count must be >= 1");
    MonteCarloEstimate est;
    est.samples = samples;
    est.seed = seed;
    if (spec.is_empty()) return est;

    const int n = spec.dimension();
    const std::vector<double> eig = spec.expanded_eigenvalues();
    std::vector<double> root(eig.size());
    std::transform(eig.begin(), eig.end(), root.begin(),
                   [](double v) { return std::sqrt(v); });
    const double inv_sqrt2 = 0.7071067811865475244;
    const int small = std::min(n, p);

    // Fixed-size blocks keep the accumulation order independent of how the
    // samples might be sharded, so results are reproducible bit for bit.
    constexpr long kBlock = 65536;
    long double total = 0.0L, total_sq = 0.0L;
    double block_sum = 0.0, block_sq = 0.0;
    Eigen::MatrixXcd b(p, n);
    Eigen::MatrixXcd w(small, small);
    for (long sample = 0; sample < samples; ++sample) {
        CounterRng rng(seed, static_cast<std::uint64_t>(sample));
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < n; ++j) {
                double re, im;
                rng.next_normal_pair(re, im);
                b(i, j) = std::complex<double>(re * inv_sqrt2, im * inv_sqrt2) * root[j];
            }
        }
        if (p <= n) {
            w.noalias() = b * b.adjoint();
        } else {
            w.noalias() = b.adjoint() * b;
        }
        w += Eigen::MatrixXcd::Identity(small, small);
        const Eigen::LLT<Eigen::MatrixXcd> llt(w);
        double v = 0.0;
        for (int i = 0; i < small; ++i) v += std::log(std::real(llt.matrixLLT()(i, i)));
        v *= 2.0;
        block_sum += v;
        block_sq += v * v;
        if ((sample + 1) % kBlock == 0) {
            total += block_sum;
            total_sq += block_sq;
            block_sum = block_sq = 0.0;
        }
    }
    total += block_sum;
    total_sq += block_sq;

    const long double mean = total / samples;
    const long double var =
        samples > 1 ? std::max(0.0L, (total_sq - samples * mean * mean) / (samples - 1)) : 0.0L;
    est.mean = static_cast<double>(mean);
    est.std_error = static_cast<double>(std::sqrt(var / samples));
    return est;
}

double det_integral_identity(const DetIntegralSpec& spec, double rel_tol, int max_depth) {
    const int p = static_cast<int>(spec.phi.size());
    const int n = static_cast<int>(spec.psi.size());
    if (p < 1 || n < p) throw std::invalid_argument("need 1 <= p <= n row functions");
    if (n > p) {
        if (static_cast<int>(spec.psi_const.size()) != n)
            throw std::invalid_argument("constant tail needs one row per psi function");
        for (const auto& row : spec.psi_const)
            if (static_cast<int>(row.size()) != n - p)
                throw std::invalid_argument("constant tail rows must have n - p entries");
    }
    if (!spec.xi || !spec.xi_tilde) throw std::invalid_argument("xi and xi_tilde are required");

    // Element integrals; c^(k) reuses them with the log weight in column k.
    Eigen::MatrixXd plain(n, p), weighted(n, p);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) {
            const auto& phi = spec.phi[static_cast<std::size_t>(j)];
            const auto& psi = spec.psi[static_cast<std::size_t>(i)];
            const auto base = [&](double x) { return phi(x) * psi(x) * spec.xi(x); };
            const QuadratureResult qp =
                integrate(base, spec.lower, spec.upper, rel_tol, max_depth);
            const QuadratureResult qw = integrate(
                [&](double x) { return base(x) * spec.xi_tilde(x); }, spec.lower, spec.upper,
                rel_tol, max_depth);
            if (!std::isfinite(qp.value))
                throw std::domain_error("element integral not finite at (i=" +
                                        std::to_string(i) + ", j=" + std::to_string(j) + ")");
            if (!std::isfinite(qw.value))
                throw std::domain_error("element integral not finite at (i=" +
                                        std::to_string(i) + ", j=" + std::to_string(j) +
                                        ", k=" + std::to_string(j) + ")");
            plain(i, j) = qp.value;
            weighted(i, j) = qw.value;
        }
    }

    SignedLogValue sum = SignedLogValue::zero();
    for (int k = 0; k < p; ++k) {
        detail::LogMatrix c(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < p; ++j) {
                c.set(i, j,
                      SignedLogValue::from_double(j == k ? weighted(i, j) : plain(i, j)));
            }
            for (int j = p; j < n; ++j) {
                c.set(i, j,
                      SignedLogValue::from_double(
                          spec.psi_const[static_cast<std::size_t>(i)]
                                        [static_cast<std::size_t>(j - p)]));
            }
        }
        sum += detail::signed_log_det(c).det;
    }
    return sum.to_double();
}

ScenarioSweep sweep(const NetworkScenario& scenario, SweepAxis axis,
                    std::span<const double> grid_db) {
    scenario.validate();
    if (grid_db.empty()) throw std::invalid_argument("sweep grid must be nonempty");
    for (std::size_t i = 1; i < grid_db.size(); ++i)
        if (!(grid_db[i] > grid_db[i - 1]))
            throw std::invalid_argument("sweep grid must be strictly increasing");
    if (axis == SweepAxis::Sir && scenario.interferer_count() < 1)
        throw std::invalid_argument("SIR sweep needs at least one interferer");

    ScenarioSweep out;
    out.scenario = scenario;
    out.axis = axis;
    out.grid_db.assign(grid_db.begin(), grid_db.end());
    out.points.resize(grid_db.size());

    for (std::size_t idx = 0; idx < grid_db.size(); ++idx) {
        SweepPoint& pt = out.points[idx];
        pt.axis_db = grid_db[idx];
        try {
            NetworkScenario s = scenario;
            const double target = std::pow(10.0, grid_db[idx] / 10.0);
            if (axis == SweepAxis::Snr) {
                s.users[0].power = target * s.noise_power;
            } else {
                const double current = s.total_interference_power();
                const double wanted = s.users[0].power / target;
                const double factor = wanted / current;
                for (std::size_t u = 1; u < s.users.size(); ++u) s.users[u].power *= factor;
            }
            s.validate();
            pt.mu = capacity_mu(s);
            pt.gauss = capacity_gaussian_approx(s);
            const double rho0 = s.rho(0);
            pt.su_ref = capacity_su(CovarianceSpec::from_groups({{rho0, s.users[0].antennas}}),
                                    s.receive_antennas);
            pt.ok = true;
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.error = e.what();
        }
    }
    return out;
}

}  // namespace mimocap
