#pragma once

#include <string>

#include "swflow/flow.hpp"

namespace swflow {

/// Parses a strict JSON config into a validated FlowConfig. Unknown keys are
/// rejected with a nearest-key suggestion; missing or ill-typed keys are
/// reported with their full key path. No defaults exist for the physics
/// parameters (k, S0, dt, t_end, integrator, grid, init); cadence and
/// tolerance keys have defaults.
FlowConfig parse_config(const std::string& path);
FlowConfig parse_config_text(const std::string& text);

/// Config echo used inside run manifests (round-trips through parse).
std::string config_to_json(const FlowConfig& config);

}  // namespace swflow
