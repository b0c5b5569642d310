#pragma once

#include "sada/sim/metrics.hpp"

namespace sada::sim {

/// Builds the world, runs every cycle with the configured attacks, and
/// checks each outcome against the plaintext oracle and the attack plan.
MetricsReport run(const ScenarioConfig& cfg);

}  // namespace sada::sim
