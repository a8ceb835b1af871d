#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mimocap/covariance.hpp"

namespace mimocap {

struct MonteCarloEstimate {
    double mean = 0.0;       // nats
    double std_error = 0.0;  // nats
    long samples = 0;
    std::uint64_t seed = 0;
};

struct CapacityDiagnostics {
    int n_min = 0;
    std::vector<double> det_log_magnitudes;  // per determinant term
    std::vector<std::string> warnings;
    std::optional<MonteCarloEstimate> mc_fallback;
};

struct CapacityResult {
    double value_nats = 0.0;
    double value_bits = 0.0;
    CapacityDiagnostics diagnostics;
};

/// Ergodic mutual information E log det(I_p + H Phi H^dag) in closed form,
/// H being p x n complex standard Gaussian and Phi given by its eigenvalue
/// groups. Empty spec gives 0. Ill-conditioned evaluations attach a warning
/// and a Monte Carlo fallback estimate; the closed form stays the primary
/// value.
CapacityResult capacity_su(const CovarianceSpec& spec, int p);

/// Multiuser ergodic mutual information as the difference of the two
/// single-user terms built from the interference covariance structure.
CapacityResult capacity_mu(const NetworkScenario& scenario);

/// Baseline that folds all interference power into spatially white noise.
CapacityResult capacity_gaussian_approx(const NetworkScenario& scenario);

/// Relay-network capacity upper bound (1/2) E log det(I + H Phi H^dag).
CapacityResult relay_upper_bound(const CovarianceSpec& spec, int p);

/// Monte Carlo estimate of capacity_su (nats), sharded by sample index; the
/// estimate is byte-reproducible for a given (seed, samples).
MonteCarloEstimate mc_capacity(const CovarianceSpec& spec, int p, long samples,
                               std::uint64_t seed);

/// Inputs of the determinant-integral identity: the ordered-domain integral
/// of |Phi(x)| |Psi(x)| prod xi(x_m) sum xi_tilde(x_i) collapses to a sum of
/// p determinants of one-dimensional element integrals.
struct DetIntegralSpec {
    std::vector<std::function<double(double)>> phi;  // p row functions of the p x p factor
    std::vector<std::function<double(double)>> psi;  // n row functions of the n x n factor
    std::vector<std::vector<double>> psi_const;      // n rows x (n-p) constant tail columns
    std::function<double(double)> xi;
    std::function<double(double)> xi_tilde;
    double lower = 0.0;
    double upper = 0.0;  // may be +infinity
};

/// Sum over k of det(c^(k)) with c^(k)_{i,j} = int phi_j psi_i xi U_{k,j}(xi_tilde)
/// for j <= p and the constant tail columns for j > p. Throws
/// std::domain_error naming (i, j, k) when an element integral is not finite.
double det_integral_identity(const DetIntegralSpec& spec, double rel_tol = 1e-10,
                             int max_depth = 15);

enum class SweepAxis { Snr, Sir };

struct SweepPoint {
    double axis_db = 0.0;
    bool ok = false;
    CapacityResult mu;
    CapacityResult gauss;
    CapacityResult su_ref;  // interference-free desired link
    std::string error;
};

struct ScenarioSweep {
    NetworkScenario scenario;
    SweepAxis axis = SweepAxis::Snr;
    std::vector<double> grid_db;
    std::vector<SweepPoint> points;
};

/// Per-point capacity_mu / gaussian approximation / single-user reference.
/// SNR sweeps rescale the desired power; SIR sweeps rescale all interferer
/// powers by a common factor, preserving their ratios (the SIR is defined
/// against total interference power). A failing point is recorded with its
/// error, never dropped.
ScenarioSweep sweep(const NetworkScenario& scenario, SweepAxis axis,
                    std::span<const double> grid_db);

}  // namespace mimocap
