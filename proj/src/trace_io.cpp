#include "platoon_shield/trace_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "platoon_shield/errors.hpp"

namespace platoon_shield::io {

namespace {

std::string fp(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string set_or_dash(const v2v::IndexSet& set) {
    if (set.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i > 0) out += '|';
        out += std::to_string(set[i]);
    }
    return out;
}

std::string rate_or_na(const std::optional<double>& rate) {
    return rate ? fp(*rate) : "n/a";
}

}  // namespace

void write_trace_csv(const sim::SimTrace& trace, std::ostream& out) {
    out << "k,t,vehicle,e,v,a,u,u_hat,fusion_err,sigma,detected,isolated,true_support\n";
    for (const sim::StepRecord& rec : trace.steps) {
        for (std::size_t vehicle = 0; vehicle < rec.states.size(); ++vehicle) {
            const model::VehicleState& s = rec.states[vehicle];
            out << rec.k << ',' << fp(rec.t) << ',' << vehicle << ',' << fp(s.e) << ',' << fp(s.v) << ','
                << fp(s.a) << ',' << fp(s.u);
            if (vehicle >= 2) {
                const sim::LinkRecord& lr = rec.links[vehicle - 2];
                out << ',' << fp(lr.outcome.u_hat) << ',' << fp(lr.outcome.u_hat - lr.frame.true_command)
                    << ',' << set_or_dash(lr.outcome.sigma) << ',' << (lr.verdict.detected ? '1' : '0')
                    << ',' << set_or_dash(lr.verdict.isolated) << ','
                    << set_or_dash(lr.frame.true_attack_support);
            } else {
                out << ",-,-,-,-,-,-";  // no radio link into this vehicle
            }
            out << '\n';
        }
    }
}

void write_metrics(const sim::Metrics& metrics, const sim::SimTrace& trace, std::ostream& out) {
    out << "scenario = " << trace.config.name << "\n";
    out << "seed = " << trace.config.master_seed << "\n";
    out << "steps = " << metrics.steps << "\n";
    out << "vehicles = " << trace.config.vehicles.size() << "\n";
    out << "max_state_inf_norm = " << fp(metrics.max_state_inf_norm) << "\n";
    out << "max_fusion_error = " << fp(metrics.max_fusion_error) << "\n";
    for (std::size_t l = 0; l < metrics.links.size(); ++l) {
        const std::string prefix = "link" + std::to_string(l + 2) + ".";
        out << prefix << "max_fusion_error = " << fp(metrics.links[l].max_fusion_error) << "\n";
        out << prefix << "error_bound = " << fp(metrics.links[l].error_bound) << "\n";
        out << prefix << "attacked_steps = " << metrics.links[l].attacked_steps << "\n";
    }
    out << "detection.attacked_steps = " << metrics.attacked_steps_detection << "\n";
    out << "detection.rate = " << rate_or_na(metrics.detection_rate) << "\n";
    out << "isolation.attacked_steps = " << metrics.attacked_steps_isolation << "\n";
    out << "isolation.exact_rate = " << rate_or_na(metrics.isolation_exact_rate) << "\n";
    out << "isolation.precision = " << rate_or_na(metrics.isolation_precision) << "\n";
    out << "isolation.recall = " << rate_or_na(metrics.isolation_recall) << "\n";
    for (const auto& [key, report] : metrics.string_stability) {
        out << "string_stability." << key << ".worst_ratio = " << fp(report.worst_ratio) << "\n";
        out << "string_stability." << key << ".monotone = " << (report.monotone ? 1 : 0) << "\n";
        out << "string_stability." << key << ".norms =";
        for (double n : report.per_vehicle_norms) out << ' ' << fp(n);
        out << "\n";
    }
}

std::vector<std::string> write_plot_data(const sim::SimTrace& trace, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;

    auto open = [&](const std::string& name) {
        std::ofstream stream(fs::path(out_dir) / name, std::ios::binary);
        if (!stream) throw ConfigError("cannot write plot file `" + name + "` in `" + out_dir + "`");
        files.push_back(name);
        return stream;
    };

    const int m = trace.config.vehicle_count();
    for (int i = 1; i <= m; ++i) {
        std::ofstream velocity = open("velocity_vehicle" + std::to_string(i) + ".dat");
        std::ofstream error = open("tracking_error_vehicle" + std::to_string(i) + ".dat");
        for (const sim::StepRecord& rec : trace.steps) {
            const model::VehicleState& s = rec.states[static_cast<std::size_t>(i)];
            velocity << fp(rec.t) << ' ' << fp(s.v) << '\n';
            error << fp(rec.t) << ' ' << fp(s.e) << '\n';
        }
    }
    for (std::size_t l = 0; l < trace.config.links.size(); ++l) {
        const std::string receiver = std::to_string(l + 2);
        std::ofstream truth = open("fusion_link" + receiver + "_true.dat");
        std::ofstream estimate = open("fusion_link" + receiver + "_est.dat");
        for (const sim::StepRecord& rec : trace.steps) {
            truth << fp(rec.t) << ' ' << fp(rec.links[l].frame.true_command) << '\n';
            estimate << fp(rec.t) << ' ' << fp(rec.links[l].outcome.u_hat) << '\n';
        }
    }

    std::ofstream script = open("plots.gp");
    script << "# gnuplot script for the emitted .dat files\n";
    script << "set xlabel 't [s]'\n\n";
    script << "set ylabel 'v [m/s]'\n";
    script << "plot";
    for (int i = 1; i <= m; ++i) {
        script << (i > 1 ? ", " : " ") << "'velocity_vehicle" << i << ".dat' with lines title 'vehicle " << i
               << "'";
    }
    script << "\npause -1\n\n";
    script << "set ylabel 'e [m]'\n";
    script << "plot";
    for (int i = 1; i <= m; ++i) {
        script << (i > 1 ? ", " : " ") << "'tracking_error_vehicle" << i << ".dat' with lines title 'vehicle "
               << i << "'";
    }
    script << "\npause -1\n";
    for (std::size_t l = 0; l < trace.config.links.size(); ++l) {
        const std::string receiver = std::to_string(l + 2);
        script << "\nset ylabel 'u [m/s^2]'\n";
        script << "plot 'fusion_link" << receiver << "_true.dat' with lines title 'true command', "
               << "'fusion_link" << receiver << "_est.dat' with lines title 'fused estimate'\n";
        script << "pause -1\n";
    }
    return files;
}

}  // namespace platoon_shield::io
