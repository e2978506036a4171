#ifndef PLATOON_SHIELD_CLI_HPP
#define PLATOON_SHIELD_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace platoon_shield::cli {

/// What a command produced: the resolved inputs plus every file written.
struct RunManifest {
    std::string scenario_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::vector<std::string> files;  // relative to out_dir
    int exit_status = 0;
};

struct RunOptions {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;  // overrides config and environment
    std::string out_dir = ".";
    bool emit_plots = false;
};

/// Runs one scenario and writes trace.csv, metrics.txt and (optionally)
/// plot data. Nothing is written unless the scenario parsed, validated and
/// ran to completion.
RunManifest cmd_run(const RunOptions& options);

struct HinfOptions {
    double h = 0.5;
    double tau = 0.1;
    double kp = 0.0;
    double kd = 0.0;
    double tol = 1e-4;
};

/// Closed-loop disturbance attenuation for one vehicle, printed to four
/// decimals.
std::string cmd_hinf(const HinfOptions& options);

struct SweepOptions {
    std::string scenario_path;
    int seeds = 1;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;  // base master seed override
};

/// Repeats the scenario under `seeds` consecutive master seeds and writes
/// rates.csv with per-seed detection/isolation rates plus mean/min/max rows.
RunManifest cmd_sweep(const SweepOptions& options);

/// Seed priority: explicit option, then PLATOON_SHIELD_SEED, then the
/// scenario file's own seed.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& option_seed, std::uint64_t config_seed);

}  // namespace platoon_shield::cli

#endif
