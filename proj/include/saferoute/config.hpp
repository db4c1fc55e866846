#pragma once

#include <string>
#include <string_view>

#include "saferoute/solver.hpp"

namespace saferoute {

// Environment variable overriding the configured seed.
inline constexpr const char* kSeedEnvironmentVariable = "SAFEROUTE_SEED";

// JSON solver configuration; absent keys keep their defaults, unknown keys
// are rejected. Throws SpecError.
SolverConfig parse_solver_config(std::string_view json_text);
SolverConfig load_solver_config(const std::string& path);
std::string solver_config_to_json(const SolverConfig& config);

// Applies SAFEROUTE_SEED when set; throws SpecError on a malformed value.
void apply_environment(SolverConfig& config);

}  // namespace saferoute
