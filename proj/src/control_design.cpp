#include "platoon_shield/control_design.hpp"

#include <cmath>
#include <limits>

#include "platoon_shield/errors.hpp"

namespace platoon_shield::control {

using numerics::Matrix;

bool validate_gains(const ControllerGains& gains, double tau) {
    return gains.valid_for(tau);
}

PerformancePlant performance_plant(const VehicleParams& params, const ControllerGains& gains) {
    auto [ac, bc] = model::build_follower(params, gains);  // validates params and gains
    StateSpacePlant plant;
    plant.A = std::move(ac);
    plant.B = std::move(bc);
    plant.C = Matrix(2, 4, {1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0});  // picks (e, v)
    plant.D = Matrix(2, 3);
    plant.validate();
    return {std::move(plant)};
}

double closed_loop_hinf(const VehicleParams& params, const ControllerGains& gains, double tol) {
    return numerics::hinf_norm(performance_plant(params, gains).plant, tol);
}

StringStabilityReport string_stability_check(const std::vector<std::vector<double>>& signals,
                                             double ts, LpNorm p, double slack) {
    if (!(ts > 0.0)) throw DomainError("string_stability_check: sampling period must be > 0");
    if (slack < 0.0) throw DomainError("string_stability_check: slack must be >= 0");
    if (signals.empty()) throw DomainError("string_stability_check: no signals");
    for (const auto& s : signals) {
        if (s.size() != signals.front().size())
            throw DimensionError("string_stability_check: signals must share one length");
    }

    StringStabilityReport report;
    report.per_vehicle_norms.reserve(signals.size());
    for (const auto& s : signals) {
        double norm = 0.0;
        if (p == LpNorm::L2) {
            for (double z : s) norm += z * z;
            norm = std::sqrt(ts * norm);
        } else {
            for (double z : s) norm = std::max(norm, std::abs(z));
        }
        report.per_vehicle_norms.push_back(norm);
    }

    for (std::size_t i = 1; i < report.per_vehicle_norms.size(); ++i) {
        const double num = report.per_vehicle_norms[i];
        const double den = report.per_vehicle_norms[i - 1];
        double ratio;
        if (den == 0.0) {
            ratio = num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
            ratio = num / den;
        }
        report.worst_ratio = std::max(report.worst_ratio, ratio);
    }
    report.monotone = report.worst_ratio <= 1.0 + slack;
    return report;
}

}  // namespace platoon_shield::control
