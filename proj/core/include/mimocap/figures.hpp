#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mimocap/capacity.hpp"

namespace mimocap {

/// Sweep results as CSV: comment lines naming units and the scenario
/// digest, then axis_db, c_mu_bits, c_gauss_bits, c_su_ref_bits, warnings.
/// Failed points keep their row with the error in the warnings column.
void write_sweep_csv(const ScenarioSweep& sweep, std::ostream& out);

/// Reproduces the library's reference study scenarios, one CSV per curve:
///   fig2  MIMO-(6,3) single user, power profile {1+d (x3), 1-d (x3)},
///         d in {0, 0.25, 0.5, 0.75, 1}, SNR sweep
///   fig3  relay bound: 4-antenna source, 5 relays x 2 antennas, relay
///         powers proportional to {1,2,5,10,20}; exact bound vs Jensen
///   fig4  MIMO-(6,6) at SNR 10 dB vs one interferer with NT1 in
///         {1,2,4,6,10}, SIR sweep, Gaussian approximation and single-user
///         reference levels
///   fig5  NR=6 at SNR 10 dB, one and two interferers matching the desired
///         user's NT0 in {3,4,5,6}, SIR sweep plus references
/// Returns the paths written. Throws std::invalid_argument for an unknown
/// name and std::runtime_error for unwritable output.
std::vector<std::string> run_figure(const std::string& name, const std::string& out_dir);

std::vector<std::string> known_figures();

}  // namespace mimocap
