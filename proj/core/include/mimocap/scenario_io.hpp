#pragma once

#include <string>
#include <vector>

#include "mimocap/covariance.hpp"

namespace mimocap {

/// Scenario files are flat key-value text, one `key = value` per line,
/// `#` starts a comment. Keys:
///   nr            receive antenna count
///   sigma2        noise variance (linear)
///   user.<k>.nt   antenna count of user k (0 = desired link)
///   user.<k>.p_db mean received power of user k, dB
///   user.<k>.p    same, linear (exactly one of p / p_db per user)
/// User indices must be contiguous from 0.
NetworkScenario parse_scenario_text(const std::string& text);
NetworkScenario load_scenario_file(const std::string& path);

/// Canonical serialization (round-trips through parse_scenario_text).
std::string format_scenario(const NetworkScenario& scenario);

/// FNV-1a hash of the canonical serialization; stamped into CSV headers so
/// outputs are traceable to their inputs.
std::string scenario_digest(const NetworkScenario& scenario);

/// Parse a "start:stop:step" dB grid specification (inclusive endpoints,
/// step > 0) into a strictly increasing grid.
std::vector<double> parse_grid_spec(const std::string& spec);

}  // namespace mimocap
