// Command-line front end: `run` simulates a scenario file, `hinf` evaluates
// the closed-loop disturbance attenuation for a gain pair, `sweep` repeats a
// scenario over consecutive seeds and aggregates the monitor rates.

#include <cstdint>
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "platoon_shield/cli.hpp"
#include "platoon_shield/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitReconstructibility = 4;

void print_manifest(const platoon_shield::cli::RunManifest& manifest) {
    std::cout << "scenario: " << manifest.scenario_path << "\n";
    std::cout << "seed: " << manifest.seed << "\n";
    for (const std::string& file : manifest.files) {
        std::cout << "wrote " << manifest.out_dir << "/" << file << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Redundant-channel CACC platoon simulator"};
    app.require_subcommand(1);

    platoon_shield::cli::RunOptions run_options;
    std::uint64_t seed_flag = 0;
    CLI::App* run = app.add_subcommand("run", "Simulate a scenario file");
    run->add_option("--scenario", run_options.scenario_path, "Scenario file")->required();
    CLI::Option* run_seed = run->add_option("--seed", seed_flag, "Master seed override");
    run->add_option("--out", run_options.out_dir, "Output directory")->required();
    run->add_flag("--emit-plots", run_options.emit_plots, "Also write plot data files");

    platoon_shield::cli::HinfOptions hinf_options;
    CLI::App* hinf = app.add_subcommand("hinf", "Closed-loop H-infinity norm for a gain pair");
    hinf->set_help_flag("--help", "Print this help message and exit");  // frees -h/--h
    hinf->add_option("--h", hinf_options.h, "Headway time constant [s]")->required();
    hinf->add_option("--tau", hinf_options.tau, "Driveline time constant [s]")->required();
    hinf->add_option("--kp", hinf_options.kp, "Position gain")->required();
    hinf->add_option("--kd", hinf_options.kd, "Derivative gain")->required();
    hinf->add_option("--tol", hinf_options.tol, "Bisection tolerance");

    platoon_shield::cli::SweepOptions sweep_options;
    std::uint64_t sweep_seed_flag = 0;
    CLI::App* sweep = app.add_subcommand("sweep", "Monte-Carlo rate estimation over seeds");
    sweep->add_option("--scenario", sweep_options.scenario_path, "Scenario file")->required();
    sweep->add_option("--seeds", sweep_options.seeds, "Number of consecutive master seeds")->required();
    CLI::Option* sweep_seed = sweep->add_option("--seed", sweep_seed_flag, "Base master seed override");
    sweep->add_option("--out", sweep_options.out_dir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (run_seed->count() > 0) run_options.seed = seed_flag;
            print_manifest(platoon_shield::cli::cmd_run(run_options));
        } else if (hinf->parsed()) {
            std::cout << platoon_shield::cli::cmd_hinf(hinf_options) << "\n";
        } else if (sweep->parsed()) {
            if (sweep_seed->count() > 0) sweep_options.seed = sweep_seed_flag;
            print_manifest(platoon_shield::cli::cmd_sweep(sweep_options));
        }
    } catch (const platoon_shield::ReconstructibilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitReconstructibility;
    } catch (const platoon_shield::DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const platoon_shield::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
