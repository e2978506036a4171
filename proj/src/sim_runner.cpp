#include "platoon_shield/sim_runner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "platoon_shield/errors.hpp"
#include "platoon_shield/numerics.hpp"
#include "platoon_shield/rng.hpp"

namespace platoon_shield::sim {

double LeaderProfile::value_at(double t) const {
    if (rows.empty()) return 0.0;
    if (t < rows.front().t_start) return rows.front().value;
    for (const LeaderProfileRow& row : rows) {
        if (t >= row.t_start && t < row.t_end) return row.value;
    }
    return rows.back().value;  // hold past the table
}

void LeaderProfile::validate() const {
    for (const LeaderProfileRow& row : rows) {
        if (!(row.t_end > row.t_start) || !std::isfinite(row.value)) {
            throw ConfigError("leader profile: rows need t_end > t_start and a finite value");
        }
    }
}

long ScenarioConfig::step_count() const {
    // floor(horizon / ts), robust to the period not being representable
    return static_cast<long>(std::floor(horizon / ts + 1e-9));
}

void ScenarioConfig::validate() const {
    if (vehicles.empty()) throw ConfigError("scenario: at least one vehicle required");
    if (!(ts > 0.0)) throw ConfigError("scenario: ts must be > 0");
    if (!(horizon > 0.0)) throw ConfigError("scenario: horizon must be > 0");
    if (!std::isfinite(initial_velocity)) throw ConfigError("scenario: initial_velocity must be finite");
    leader_profile.validate();
    if (virtual_leader) virtual_leader->validate();

    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        const VehicleSetup& v = vehicles[i];
        v.params.validate();
        if (!v.gains.valid_for(v.params.tau)) {
            throw ConfigError("scenario: vehicle " + std::to_string(i + 1) +
                              " gains violate kp > 0, kd > 0, kd > kp*tau");
        }
        if (v.sensor_noise_d < 0.0 || v.sensor_noise_v < 0.0) {
            throw ConfigError("scenario: vehicle " + std::to_string(i + 1) + " sensor noise bounds must be >= 0");
        }
    }

    if (links.size() + 1 != vehicles.size()) {
        throw ConfigError("scenario: need exactly one link per follower (" +
                          std::to_string(vehicles.size() - 1) + " links, got " +
                          std::to_string(links.size()) + ")");
    }
    for (std::size_t l = 0; l < links.size(); ++l) {
        const LinkSetup& link = links[l];
        const int n = static_cast<int>(link.channels.size());
        if (n < 1) throw ConfigError("scenario: link " + std::to_string(l + 2) + " has no channels");
        for (const v2v::ChannelModel& ch : link.channels) {
            if (ch.noise_bound < 0.0 || !std::isfinite(ch.noise_bound)) {
                throw ConfigError("scenario: link " + std::to_string(l + 2) + " has a bad noise bound");
            }
        }
        link.policy.validate(n);
        if (!falsification && !fusion::is_reconstructible(n, link.policy.q)) {
            throw ReconstructibilityError("scenario: link " + std::to_string(l + 2) + " allows q = " +
                                          std::to_string(link.policy.q) + " >= N/2 attacks (N = " +
                                          std::to_string(n) +
                                          "); tag the scenario as falsification to run anyway");
        }
    }
}

namespace {

// Receiver-side q for fusing a link's frame. Falsification scenarios carry
// q >= N/2 attack budgets that fuse() rightly refuses, so the receiver
// falls back to the largest admissible assumption.
int receiver_q(const LinkSetup& link, bool falsification) {
    const int n = static_cast<int>(link.channels.size());
    if (!falsification) return link.policy.q;
    return std::min(link.policy.q, (n - 1) / 2);
}

}  // namespace

SimTrace run_scenario(const ScenarioConfig& config) {
    config.validate();

    const int m = config.vehicle_count();
    const long total_steps = config.step_count();

    const model::VehicleParams leader_params = config.virtual_leader.value_or(config.vehicles[0].params);
    auto [leader_ac, leader_bc] = model::build_leader(leader_params);
    const model::DiscretePlant leader_plant = model::discretize(leader_ac, leader_bc, config.ts);

    std::vector<model::DiscretePlant> plants;
    plants.reserve(config.vehicles.size());
    for (const VehicleSetup& v : config.vehicles) {
        auto [ac, bc] = model::build_follower(v.params, v.gains);
        plants.push_back(model::discretize(ac, bc, config.ts));
    }

    std::vector<Rng> link_rng;
    std::vector<Rng> monitor_rng;
    for (std::size_t l = 0; l < config.links.size(); ++l) {
        const std::uint64_t receiver = l + 2;
        link_rng.emplace_back(derive_stream_seed(config.master_seed, "link:" + config.name, receiver));
        monitor_rng.emplace_back(derive_stream_seed(config.master_seed, "monitor:" + config.name, receiver));
    }
    std::vector<Rng> vehicle_rng;
    for (int i = 1; i <= m; ++i) {
        vehicle_rng.emplace_back(derive_stream_seed(config.master_seed, "vehicle:" + config.name,
                                                    static_cast<std::uint64_t>(i)));
    }

    // Equilibrium start: zero spacing errors, common velocity, no
    // acceleration or command.
    std::vector<model::VehicleState> states(static_cast<std::size_t>(m) + 1);
    for (auto& s : states) s.v = config.initial_velocity;

    SimTrace trace;
    trace.config = config;
    trace.steps.reserve(static_cast<std::size_t>(total_steps));

    for (long k = 0; k < total_steps; ++k) {
        const double t = static_cast<double>(k) * config.ts;

        StepRecord record;
        record.k = k;
        record.t = t;
        record.states = states;

        // All frames and inputs are taken from the state at step k, then
        // every vehicle advances at once.
        record.links.reserve(config.links.size());
        for (std::size_t l = 0; l < config.links.size(); ++l) {
            const LinkSetup& link = config.links[l];
            LinkRecord lr;
            lr.frame = v2v::transmit(states[l + 1].u, link.channels, link.policy, k, link_rng[l]);
            lr.outcome = fusion::fuse(lr.frame.values, receiver_q(link, config.falsification),
                                      fusion::noise_bound_inf(link.channels));
            lr.verdict = monitor::isolate(lr.frame.values, lr.outcome.sigma, link.channels,
                                          config.reference_rule, &monitor_rng[l]);
            record.links.push_back(std::move(lr));
        }

        std::vector<model::VehicleState> next(states.size());
        const double eps0 = config.leader_profile.value_at(t);
        next[0] = model::step(states[0], std::span<const double>(&eps0, 1), leader_plant);

        for (int i = 1; i <= m; ++i) {
            const VehicleSetup& setup = config.vehicles[static_cast<std::size_t>(i - 1)];
            Rng& rng = vehicle_rng[static_cast<std::size_t>(i - 1)];
            const double wd = setup.sensor_noise_d > 0.0 ? rng.uniform(-setup.sensor_noise_d, setup.sensor_noise_d) : 0.0;
            const double wv = setup.sensor_noise_v > 0.0 ? rng.uniform(-setup.sensor_noise_v, setup.sensor_noise_v) : 0.0;
            // Vehicle 1's virtual predecessor lives on board; its command
            // needs no radio link.
            const double feedforward = i == 1 ? states[0].u : record.links[static_cast<std::size_t>(i - 2)].outcome.u_hat;
            const double input[3] = {wd, states[static_cast<std::size_t>(i - 1)].v + wv, feedforward};
            next[static_cast<std::size_t>(i)] =
                model::step(states[static_cast<std::size_t>(i)], input, plants[static_cast<std::size_t>(i - 1)]);
            if (!next[static_cast<std::size_t>(i)].finite()) {
                throw DivergenceError("simulation diverged at vehicle " + std::to_string(i) + ", step " +
                                      std::to_string(k), k);
            }
        }
        if (!next[0].finite()) throw DivergenceError("virtual leader state diverged at step " + std::to_string(k), k);

        trace.steps.push_back(std::move(record));
        states = std::move(next);
    }
    return trace;
}

std::vector<std::vector<double>> extract_signal(const SimTrace& trace, Signal signal, int first_vehicle) {
    const int m = trace.config.vehicle_count();
    if (first_vehicle < 1 || first_vehicle > m) throw DomainError("extract_signal: vehicle index out of range");
    std::vector<std::vector<double>> out;
    for (int i = first_vehicle; i <= m; ++i) {
        std::vector<double> series;
        series.reserve(trace.steps.size());
        for (const StepRecord& rec : trace.steps) {
            const model::VehicleState& s = rec.states[static_cast<std::size_t>(i)];
            series.push_back(signal == Signal::SpacingError ? s.e
                             : signal == Signal::Velocity   ? s.v
                                                            : s.a);
        }
        out.push_back(std::move(series));
    }
    return out;
}

namespace {

bool within_window(long k, long window) { return window <= 0 || k < window; }

}  // namespace

Metrics compute_metrics(const SimTrace& trace) {
    Metrics metrics;
    metrics.steps = static_cast<long>(trace.steps.size());
    metrics.links.resize(trace.config.links.size());
    for (std::size_t l = 0; l < trace.config.links.size(); ++l) {
        metrics.links[l].error_bound = 3.0 * fusion::noise_bound_inf(trace.config.links[l].channels);
    }

    long detected_attacked = 0;
    long exact_hits = 0;
    long true_positives = 0;
    long isolated_total = 0;
    long support_total = 0;

    for (const StepRecord& rec : trace.steps) {
        for (const model::VehicleState& s : rec.states) {
            const double mag = std::max({std::abs(s.e), std::abs(s.v), std::abs(s.a), std::abs(s.u)});
            metrics.max_state_inf_norm = std::max(metrics.max_state_inf_norm, mag);
        }
        for (std::size_t l = 0; l < rec.links.size(); ++l) {
            const LinkRecord& lr = rec.links[l];
            const double err = std::abs(lr.outcome.u_hat - lr.frame.true_command);
            metrics.links[l].max_fusion_error = std::max(metrics.links[l].max_fusion_error, err);
            metrics.max_fusion_error = std::max(metrics.max_fusion_error, err);

            const bool attacked = !lr.frame.true_attack_support.empty();
            if (attacked) metrics.links[l].attacked_steps += 1;

            if (within_window(rec.k, trace.config.detection_window) && attacked) {
                metrics.attacked_steps_detection += 1;
                if (lr.verdict.detected) detected_attacked += 1;
            }
            if (within_window(rec.k, trace.config.isolation_window)) {
                if (attacked) {
                    metrics.attacked_steps_isolation += 1;
                    if (lr.verdict.isolated == lr.frame.true_attack_support) exact_hits += 1;
                }
                isolated_total += static_cast<long>(lr.verdict.isolated.size());
                support_total += static_cast<long>(lr.frame.true_attack_support.size());
                v2v::IndexSet overlap;
                std::set_intersection(lr.verdict.isolated.begin(), lr.verdict.isolated.end(),
                                      lr.frame.true_attack_support.begin(), lr.frame.true_attack_support.end(),
                                      std::back_inserter(overlap));
                true_positives += static_cast<long>(overlap.size());
            }
        }
    }

    if (metrics.attacked_steps_detection > 0) {
        metrics.detection_rate = static_cast<double>(detected_attacked) /
                                 static_cast<double>(metrics.attacked_steps_detection);
    }
    if (metrics.attacked_steps_isolation > 0) {
        metrics.isolation_exact_rate = static_cast<double>(exact_hits) /
                                       static_cast<double>(metrics.attacked_steps_isolation);
    }
    if (isolated_total > 0) {
        metrics.isolation_precision = static_cast<double>(true_positives) / static_cast<double>(isolated_total);
    }
    if (support_total > 0) {
        metrics.isolation_recall = static_cast<double>(true_positives) / static_cast<double>(support_total);
    }

    if (!trace.steps.empty()) {
        for (const auto& [signal, label] : {std::pair{Signal::SpacingError, std::string("e")},
                                            std::pair{Signal::Velocity, std::string("v")},
                                            std::pair{Signal::Acceleration, std::string("a")}}) {
            const auto series = extract_signal(trace, signal);
            metrics.string_stability[label + ".l2"] =
                control::string_stability_check(series, trace.config.ts, control::LpNorm::L2);
            metrics.string_stability[label + ".linf"] =
                control::string_stability_check(series, trace.config.ts, control::LpNorm::LInf);
        }
    }
    return metrics;
}

}  // namespace platoon_shield::sim
