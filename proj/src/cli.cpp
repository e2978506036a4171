#include "platoon_shield/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "platoon_shield/control_design.hpp"
#include "platoon_shield/errors.hpp"
#include "platoon_shield/scenario_config.hpp"
#include "platoon_shield/sim_runner.hpp"
#include "platoon_shield/trace_io.hpp"

namespace platoon_shield::cli {

namespace fs = std::filesystem;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& option_seed, std::uint64_t config_seed) {
    if (option_seed) return *option_seed;
    if (const char* env = std::getenv("PLATOON_SHIELD_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0') throw ConfigError("PLATOON_SHIELD_SEED is not a non-negative integer");
        return v;
    }
    return config_seed;
}

namespace {

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write `" + name + "` in `" + dir.string() + "`");
    return out;
}

std::string rate_cell(const std::optional<double>& rate) {
    if (!rate) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", *rate);
    return buf;
}

}  // namespace

RunManifest cmd_run(const RunOptions& options) {
    sim::ScenarioConfig config = io::parse_scenario_file(options.scenario_path);
    config.master_seed = resolve_seed(options.seed, config.master_seed);

    const sim::SimTrace trace = sim::run_scenario(config);
    const sim::Metrics metrics = sim::compute_metrics(trace);

    RunManifest manifest;
    manifest.scenario_path = options.scenario_path;
    manifest.seed = config.master_seed;
    manifest.out_dir = options.out_dir;

    fs::create_directories(options.out_dir);
    {
        std::ofstream out = open_output(options.out_dir, "trace.csv");
        io::write_trace_csv(trace, out);
        manifest.files.push_back("trace.csv");
    }
    {
        std::ofstream out = open_output(options.out_dir, "metrics.txt");
        io::write_metrics(metrics, trace, out);
        manifest.files.push_back("metrics.txt");
    }
    if (options.emit_plots) {
        const std::vector<std::string> plots = io::write_plot_data(trace, options.out_dir);
        manifest.files.insert(manifest.files.end(), plots.begin(), plots.end());
    }
    return manifest;
}

std::string cmd_hinf(const HinfOptions& options) {
    const model::VehicleParams params{options.h, options.tau};
    const model::ControllerGains gains{options.kp, options.kd};
    if (!control::validate_gains(gains, params.tau)) {
        throw ConfigError("gains must satisfy kp > 0, kd > 0, kd > kp*tau");
    }
    const double gamma = control::closed_loop_hinf(params, gains, options.tol);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", gamma);
    return buf;
}

RunManifest cmd_sweep(const SweepOptions& options) {
    if (options.seeds < 1) throw ConfigError("sweep: need at least one seed");
    sim::ScenarioConfig config = io::parse_scenario_file(options.scenario_path);
    const std::uint64_t base_seed = resolve_seed(options.seed, config.master_seed);

    struct Row {
        std::uint64_t seed;
        sim::Metrics metrics;
    };
    std::vector<Row> rows;
    rows.reserve(static_cast<std::size_t>(options.seeds));
    for (int s = 0; s < options.seeds; ++s) {
        config.master_seed = base_seed + static_cast<std::uint64_t>(s);
        const sim::SimTrace trace = sim::run_scenario(config);
        rows.push_back({config.master_seed, sim::compute_metrics(trace)});
    }

    RunManifest manifest;
    manifest.scenario_path = options.scenario_path;
    manifest.seed = base_seed;
    manifest.out_dir = options.out_dir;

    fs::create_directories(options.out_dir);
    std::ofstream out = open_output(options.out_dir, "rates.csv");
    out << "seed,detection_rate,isolation_exact_rate,isolation_precision,isolation_recall,max_fusion_error\n";

    auto aggregate = [&](auto select) {
        double sum = 0.0;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        long count = 0;
        for (const Row& row : rows) {
            const std::optional<double> v = select(row.metrics);
            if (!v) continue;
            sum += *v;
            lo = std::min(lo, *v);
            hi = std::max(hi, *v);
            ++count;
        }
        struct Agg {
            std::optional<double> mean, min, max;
        } agg;
        if (count > 0) {
            agg.mean = sum / static_cast<double>(count);
            agg.min = lo;
            agg.max = hi;
        }
        return agg;
    };

    auto detection = [](const sim::Metrics& m) { return m.detection_rate; };
    auto exact = [](const sim::Metrics& m) { return m.isolation_exact_rate; };
    auto precision = [](const sim::Metrics& m) { return m.isolation_precision; };
    auto recall = [](const sim::Metrics& m) { return m.isolation_recall; };
    auto fuse_err = [](const sim::Metrics& m) { return std::optional<double>(m.max_fusion_error); };

    for (const Row& row : rows) {
        out << row.seed << ',' << rate_cell(detection(row.metrics)) << ',' << rate_cell(exact(row.metrics))
            << ',' << rate_cell(precision(row.metrics)) << ',' << rate_cell(recall(row.metrics)) << ','
            << rate_cell(fuse_err(row.metrics)) << '\n';
    }
    const auto det = aggregate(detection);
    const auto exa = aggregate(exact);
    const auto pre = aggregate(precision);
    const auto rec = aggregate(recall);
    const auto fus = aggregate(fuse_err);
    out << "mean," << rate_cell(det.mean) << ',' << rate_cell(exa.mean) << ',' << rate_cell(pre.mean) << ','
        << rate_cell(rec.mean) << ',' << rate_cell(fus.mean) << '\n';
    out << "min," << rate_cell(det.min) << ',' << rate_cell(exa.min) << ',' << rate_cell(pre.min) << ','
        << rate_cell(rec.min) << ',' << rate_cell(fus.min) << '\n';
    out << "max," << rate_cell(det.max) << ',' << rate_cell(exa.max) << ',' << rate_cell(pre.max) << ','
        << rate_cell(rec.max) << ',' << rate_cell(fus.max) << '\n';

    manifest.files.push_back("rates.csv");
    return manifest;
}

}  // namespace platoon_shield::cli
