#ifndef PLATOON_SHIELD_SIM_RUNNER_HPP
#define PLATOON_SHIELD_SIM_RUNNER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "platoon_shield/attack_monitor.hpp"
#include "platoon_shield/control_design.hpp"
#include "platoon_shield/fusion.hpp"
#include "platoon_shield/platoon_model.hpp"
#include "platoon_shield/v2v_link.hpp"

namespace platoon_shield::sim {

struct LeaderProfileRow {
    double t_start;
    double t_end;
    double value;  // desired acceleration, m/s^2
};

/// Piecewise-constant desired-acceleration table for the virtual leader.
/// Intervals are treated as [t_start, t_end); past the last row the last
/// value is held.
struct LeaderProfile {
    std::vector<LeaderProfileRow> rows;

    double value_at(double t) const;
    void validate() const;
};

struct VehicleSetup {
    model::VehicleParams params;
    model::ControllerGains gains;
    double sensor_noise_d = 0.0;  // bound of the distance-sensor noise, uniform
    double sensor_noise_v = 0.0;  // bound of the relative-velocity noise
};

struct LinkSetup {
    std::vector<v2v::ChannelModel> channels;
    v2v::AttackPolicy policy;
};

/// Full description of one deterministic simulation run.
///
/// vehicles[0] is the lead (real) vehicle 1; links[i] carries vehicle
/// (i+1)'s command to vehicle (i+2). The lead vehicle follows a virtual
/// reference vehicle driven by the leader profile; its feedforward needs no
/// communication channel.
struct ScenarioConfig {
    std::string name = "scenario";
    std::vector<VehicleSetup> vehicles;
    std::optional<model::VehicleParams> virtual_leader;  // defaults to vehicle 1's params
    std::vector<LinkSetup> links;                        // size vehicles.size() - 1
    double ts = 0.01;
    double horizon = 20.0;
    double initial_velocity = 0.0;  // common to all vehicles at k = 0
    std::uint64_t master_seed = 0;
    LeaderProfile leader_profile;
    bool falsification = false;  // permits q >= N/2 attack policies
    long detection_window = 0;   // steps considered for the detection rate; 0 = all
    long isolation_window = 0;   // steps considered for the isolation rates; 0 = all
    monitor::ReferenceRule reference_rule = monitor::ReferenceRule::SmallestIndex;

    int vehicle_count() const { return static_cast<int>(vehicles.size()); }
    long step_count() const;
    void validate() const;
};

struct LinkRecord {
    v2v::ChannelFrame frame;
    fusion::FusionOutcome outcome;
    monitor::MonitorVerdict verdict;
};

struct StepRecord {
    long k = 0;
    double t = 0.0;
    std::vector<model::VehicleState> states;  // index 0 = virtual leader, 1..m real
    std::vector<LinkRecord> links;            // index i = link into vehicle i+2
};

struct SimTrace {
    ScenarioConfig config;
    std::vector<StepRecord> steps;
};

/// Runs the closed loop: virtual leader driven by the profile, per-link
/// transmission and fusion, monitor verdicts, synchronous state update.
/// Fully determined by (config, master_seed). Throws DivergenceError with
/// the offending step if any state becomes non-finite.
SimTrace run_scenario(const ScenarioConfig& config);

enum class Signal { SpacingError, Velocity, Acceleration };

/// Per-vehicle time series of one signal for real vehicles
/// first_vehicle..m.
std::vector<std::vector<double>> extract_signal(const SimTrace& trace, Signal signal,
                                                int first_vehicle = 1);

struct LinkMetrics {
    double max_fusion_error = 0.0;
    double error_bound = 0.0;  // 3 * ||nu||_inf of the link
    long attacked_steps = 0;
};

struct Metrics {
    long steps = 0;
    std::vector<LinkMetrics> links;
    double max_fusion_error = 0.0;  // across links
    long attacked_steps_detection = 0;
    long attacked_steps_isolation = 0;
    std::optional<double> detection_rate;        // detected / attacked, detection window
    std::optional<double> isolation_exact_rate;  // isolated set == true support
    std::optional<double> isolation_precision;
    std::optional<double> isolation_recall;
    double max_state_inf_norm = 0.0;  // boundedness witness
    // keyed "e.l2", "e.linf", "v.l2", "v.linf", "a.l2", "a.linf"
    std::map<std::string, control::StringStabilityReport> string_stability;
};

Metrics compute_metrics(const SimTrace& trace);

}  // namespace platoon_shield::sim

#endif
