#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "platoon_shield/cli.hpp"
#include "platoon_shield/errors.hpp"
#include "platoon_shield/scenario_config.hpp"
#include "platoon_shield/sim_runner.hpp"
#include "platoon_shield/trace_io.hpp"

using namespace platoon_shield;
namespace fs = std::filesystem;

namespace {

const char* kExampleText = R"(# two vehicles, one attacked link
[platoon]
name = demo
vehicles = 2

[sim]
ts = 0.01
horizon = 2.0
seed = 9
initial_velocity = 0

[leader_profile]
row = 0 5 -10
row = 5 10 0

[vehicle.1]
h = 0.5
tau = 0.1
kp = 5.002
kd = 305.1862
sensor_noise_d = 0.1
sensor_noise_v = 0.1

[vehicle.2]
h = 0.5
tau = 0.1
kp = 0.2
kd = 0.7

[link.2]
noise_bounds = 0.01 0.02 0.03
noise = uniform
attack = random_single_channel
attack_std = 5

[monitor]
reference_rule = random
isolation_window = 20
)";

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path fresh_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_SUITE("config_io") {

TEST_CASE("parse reads every section") {
    const sim::ScenarioConfig config = io::parse_scenario_text(kExampleText);
    CHECK(config.name == "demo");
    CHECK(config.vehicle_count() == 2);
    CHECK(config.ts == 0.01);
    CHECK(config.horizon == 2.0);
    CHECK(config.master_seed == 9);
    CHECK(config.leader_profile.rows.size() == 2);
    CHECK(config.vehicles[0].gains.kd == 305.1862);
    CHECK(config.vehicles[0].sensor_noise_d == 0.1);
    CHECK(config.vehicles[1].sensor_noise_d == 0.0);
    REQUIRE(config.links.size() == 1);
    CHECK(config.links[0].channels.size() == 3);
    CHECK(config.links[0].channels[2].noise_bound == 0.03);
    CHECK(config.links[0].policy.kind == v2v::AttackKind::RandomSingleChannel);
    CHECK(config.links[0].policy.q == 1);  // inferred from the attack kind
    CHECK(config.links[0].policy.magnitude.stddev == 5.0);
    CHECK(config.reference_rule == monitor::ReferenceRule::SeededRandom);
    CHECK(config.isolation_window == 20);
}

TEST_CASE("serialized form reparses to the same canonical text") {
    const sim::ScenarioConfig config = io::parse_scenario_text(kExampleText);
    const std::string canonical = io::serialize_scenario(config);
    const sim::ScenarioConfig reparsed = io::parse_scenario_text(canonical, "<roundtrip>");
    CHECK(io::serialize_scenario(reparsed) == canonical);
    CHECK(reparsed.links[0].policy.q == config.links[0].policy.q);
    CHECK(reparsed.vehicles[0].gains.kp == config.vehicles[0].gains.kp);
}

TEST_CASE("schedule and fixed-set attacks round-trip") {
    sim::ScenarioConfig config = io::parse_scenario_text(kExampleText);
    config.links[0].policy.kind = v2v::AttackKind::CustomSchedule;
    config.links[0].policy.schedule = {{0, {1}}, {7, {2, 3}}};
    config.links[0].policy.q = 2;
    config.falsification = true;
    const sim::ScenarioConfig reparsed = io::parse_scenario_text(io::serialize_scenario(config));
    CHECK(reparsed.links[0].policy.schedule == config.links[0].policy.schedule);
    CHECK(reparsed.falsification);

    config.links[0].policy.kind = v2v::AttackKind::FixedSet;
    config.links[0].policy.schedule.clear();
    config.links[0].policy.fixed_channels = {1, 3};
    const sim::ScenarioConfig fixed = io::parse_scenario_text(io::serialize_scenario(config));
    CHECK(fixed.links[0].policy.fixed_channels == v2v::IndexSet{1, 3});
}

TEST_CASE("parser diagnostics carry file and line") {
    const char* bad_number = "[platoon]\nvehicles = two\n";
    try {
        io::parse_scenario_text(bad_number, "bad.cfg");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bad.cfg:2") != std::string::npos);
    }

    const char* unknown_key = "[platoon]\nvehicles = 1\ncolor = red\n";
    try {
        io::parse_scenario_text(unknown_key);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
        CHECK(std::string(e.what()).find("color") != std::string::npos);
    }
}

TEST_CASE("structural errors are rejected") {
    CHECK_THROWS_AS(io::parse_scenario_text("x = 1\n"), ConfigError);            // key before section
    CHECK_THROWS_AS(io::parse_scenario_text("[platoon]\n"), ConfigError);        // missing vehicles
    CHECK_THROWS_AS(io::parse_scenario_text("[nonsense]\nvehicles = 1\n"), ConfigError);
    const char* missing_vehicle =
        "[platoon]\nvehicles = 2\n[vehicle.1]\nh = 0.5\ntau = 0.1\nkp = 1\nkd = 2\n";
    CHECK_THROWS_AS(io::parse_scenario_text(missing_vehicle), ConfigError);
}

TEST_CASE("an over-budget attacker is rejected unless tagged as falsification") {
    sim::ScenarioConfig config = io::parse_scenario_text(kExampleText);
    config.links[0].policy.q = 2;
    CHECK_THROWS_AS(config.validate(), ReconstructibilityError);
    config.falsification = true;
    config.validate();
}

TEST_CASE("seed resolution prefers the flag, then the environment, then the file") {
    unsetenv("PLATOON_SHIELD_SEED");
    CHECK(cli::resolve_seed(std::nullopt, 9) == 9);
    CHECK(cli::resolve_seed(4, 9) == 4);
    setenv("PLATOON_SHIELD_SEED", "77", 1);
    CHECK(cli::resolve_seed(std::nullopt, 9) == 77);
    CHECK(cli::resolve_seed(4, 9) == 4);
    setenv("PLATOON_SHIELD_SEED", "nope", 1);
    CHECK_THROWS_AS(cli::resolve_seed(std::nullopt, 9), ConfigError);
    unsetenv("PLATOON_SHIELD_SEED");
}

TEST_CASE("cmd_run writes byte-stable outputs") {
    unsetenv("PLATOON_SHIELD_SEED");
    const fs::path scenario = fs::temp_directory_path() / "demo_scenario.cfg";
    {
        std::ofstream out(scenario, std::ios::binary);
        out << kExampleText;
    }
    const fs::path dir_a = fresh_dir("psh_run_a");
    const fs::path dir_b = fresh_dir("psh_run_b");

    cli::RunOptions options;
    options.scenario_path = scenario.string();
    options.out_dir = dir_a.string();
    const cli::RunManifest manifest = cli::cmd_run(options);
    CHECK(manifest.exit_status == 0);
    CHECK(manifest.seed == 9);
    for (const std::string& file : manifest.files) {
        CHECK(fs::exists(dir_a / file));
    }

    options.out_dir = dir_b.string();
    cli::cmd_run(options);
    CHECK(slurp(dir_a / "trace.csv") == slurp(dir_b / "trace.csv"));
    CHECK(slurp(dir_a / "metrics.txt") == slurp(dir_b / "metrics.txt"));

    const std::string csv = slurp(dir_a / "trace.csv");
    CHECK(csv.rfind("k,t,vehicle,e,v,a,u,u_hat,fusion_err,sigma,detected,isolated,true_support\n", 0) == 0);

    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    fs::remove(scenario);
}

TEST_CASE("cmd_run on a missing scenario leaves no outputs behind") {
    const fs::path dir = fresh_dir("psh_run_missing");
    cli::RunOptions options;
    options.scenario_path = (fs::temp_directory_path() / "no_such_scenario.cfg").string();
    options.out_dir = dir.string();
    CHECK_THROWS_AS(cli::cmd_run(options), ConfigError);
    CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("cmd_run emits plot data on request") {
    const fs::path scenario = fs::temp_directory_path() / "demo_scenario_plots.cfg";
    {
        std::ofstream out(scenario, std::ios::binary);
        out << kExampleText;
    }
    const fs::path dir = fresh_dir("psh_run_plots");
    cli::RunOptions options;
    options.scenario_path = scenario.string();
    options.out_dir = dir.string();
    options.emit_plots = true;
    const cli::RunManifest manifest = cli::cmd_run(options);
    CHECK(fs::exists(dir / "velocity_vehicle1.dat"));
    CHECK(fs::exists(dir / "tracking_error_vehicle2.dat"));
    CHECK(fs::exists(dir / "fusion_link2_est.dat"));
    CHECK(fs::exists(dir / "plots.gp"));
    CHECK(manifest.files.size() >= 9);
    fs::remove_all(dir);
    fs::remove(scenario);
}

TEST_CASE("cmd_hinf prints four decimals and validates gains") {
    cli::HinfOptions options;
    options.h = 0.5;
    options.tau = 0.1;
    options.kp = 0.2;
    options.kd = 0.7;
    const std::string printed = cli::cmd_hinf(options);
    CHECK(printed.size() >= 6);
    CHECK(printed.find('.') != std::string::npos);
    CHECK(printed.substr(printed.find('.') + 1).size() == 4);
    CHECK(std::abs(std::stod(printed) - 5.1) <= 0.26);

    options.kd = 0.01;  // below kp * tau
    CHECK_THROWS_AS(cli::cmd_hinf(options), ConfigError);
}

TEST_CASE("single-seed sweep matches a direct run") {
    unsetenv("PLATOON_SHIELD_SEED");
    const fs::path scenario = fs::temp_directory_path() / "demo_scenario_sweep.cfg";
    {
        std::ofstream out(scenario, std::ios::binary);
        out << kExampleText;
    }
    const fs::path dir = fresh_dir("psh_sweep");
    cli::SweepOptions options;
    options.scenario_path = scenario.string();
    options.seeds = 1;
    options.out_dir = dir.string();
    cli::cmd_sweep(options);

    const sim::ScenarioConfig config = io::parse_scenario_file(scenario.string());
    const sim::Metrics direct = sim::compute_metrics(sim::run_scenario(config));

    const std::string rates = slurp(dir / "rates.csv");
    REQUIRE(direct.detection_rate.has_value());
    char expected[64];
    std::snprintf(expected, sizeof expected, "9,%.9g", *direct.detection_rate);
    CHECK(rates.find(expected) != std::string::npos);
    CHECK(rates.find("mean,") != std::string::npos);
    CHECK(rates.find("min,") != std::string::npos);
    CHECK(rates.find("max,") != std::string::npos);

    fs::remove_all(dir);
    fs::remove(scenario);
}

TEST_CASE("multi-seed sweeps draw independent rates per seed") {
    const fs::path scenario = fs::temp_directory_path() / "demo_scenario_sweep2.cfg";
    {
        std::ofstream out(scenario, std::ios::binary);
        out << kExampleText;
    }
    const fs::path dir = fresh_dir("psh_sweep2");
    cli::SweepOptions options;
    options.scenario_path = scenario.string();
    options.seeds = 2;
    options.out_dir = dir.string();
    cli::cmd_sweep(options);

    std::ifstream in(dir / "rates.csv");
    std::string header, row_a, row_b;
    std::getline(in, header);
    std::getline(in, row_a);
    std::getline(in, row_b);
    CHECK(row_a.rfind("9,", 0) == 0);
    CHECK(row_b.rfind("10,", 0) == 0);
    CHECK(row_a.substr(row_a.find(',')) != row_b.substr(row_b.find(',')));

    fs::remove_all(dir);
    fs::remove(scenario);
}

}  // TEST_SUITE
