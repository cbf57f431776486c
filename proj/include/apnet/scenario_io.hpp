#pragma once

#include "apnet/sim.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace apnet {

/// Scenario documents use 1-based agent, input and target indices; the
/// in-memory Scenario is 0-based. Malformed documents raise ParseError with a
/// JSON-pointer path to the offending value.
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

/// Header: t, x_1..x_n, xi_1..xi_n, epsilon, epsilon_valid, delta_norm,
/// lyapunov, bound. Numbers carry 12 significant digits.
void write_csv(std::ostream& out, const Trajectory& traj);
void write_csv(const std::string& path, const Trajectory& traj);

std::vector<std::string> builtin_names();

/// Throws std::invalid_argument for an unknown name.
Scenario builtin_scenario(std::string_view name);

}  // namespace apnet
