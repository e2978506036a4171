#ifndef PLATOON_SHIELD_SCENARIO_CONFIG_HPP
#define PLATOON_SHIELD_SCENARIO_CONFIG_HPP

#include <string>
#include <string_view>

#include "platoon_shield/sim_runner.hpp"

namespace platoon_shield::io {

/// Parses the flat-sectioned scenario format:
///
///   [platoon]   name, vehicles, falsification
///   [sim]       ts, horizon, seed, initial_velocity
///   [leader_profile]  repeated `row = t_start t_end value`
///   [vehicle.i] h, tau, kp, kd, r, length, sensor_noise_d, sensor_noise_v
///               (i = 0 is the optional virtual-leader override: h, tau only)
///   [link.i]    noise_bounds, noise, attack, attack_q, attack_mean,
///               attack_std, attack_channels, schedule   (i = receiver, 2..m)
///   [monitor]   reference_rule, detection_window, isolation_window
///
/// `#` starts a comment. Errors carry file/line diagnostics. The parsed
/// config is validated before it is returned.
sim::ScenarioConfig parse_scenario_text(std::string_view text, std::string_view origin = "<memory>");

sim::ScenarioConfig parse_scenario_file(const std::string& path);

/// Canonical text form; parse_scenario_text(serialize_scenario(c)) is
/// equivalent to c. Floats are written with round-trip precision.
std::string serialize_scenario(const sim::ScenarioConfig& config);

}  // namespace platoon_shield::io

#endif
