#ifndef PLATOON_SHIELD_CONTROL_DESIGN_HPP
#define PLATOON_SHIELD_CONTROL_DESIGN_HPP

#include <vector>

#include "platoon_shield/numerics.hpp"
#include "platoon_shield/platoon_model.hpp"

namespace platoon_shield::control {

using model::ControllerGains;
using model::VehicleParams;
using numerics::StateSpacePlant;

/// Gain constraints for the vehicle-following objective:
/// kp > 0, kd > 0, kd > kp * tau.
bool validate_gains(const ControllerGains& gains, double tau);

/// Disturbance-to-performance plant of one closed-loop vehicle: A is the
/// closed-loop matrix, B the three disturbance inputs (distance-sensor
/// noise, predecessor velocity + sensor noise, predecessor command +
/// fusion error), and the output selects spacing error and velocity.
struct PerformancePlant {
    StateSpacePlant plant;
};

PerformancePlant performance_plant(const VehicleParams& params, const ControllerGains& gains);

/// Worst-case L2 amplification from the disturbance vector to (e, v).
double closed_loop_hinf(const VehicleParams& params, const ControllerGains& gains, double tol = 1e-4);

enum class LpNorm { L2, LInf };

struct StringStabilityReport {
    std::vector<double> per_vehicle_norms;
    double worst_ratio = 0.0;  // max over consecutive pairs; 0/0 counts as 0
    bool monotone = false;     // worst_ratio <= 1 + slack
};

/// Signal-norm monotonicity along the platoon. signals[i] is one vehicle's
/// sampled signal (all the same length, sampled at ts); the discrete L2
/// norm is sqrt(ts * sum z^2), LInf is max |z|.
StringStabilityReport string_stability_check(const std::vector<std::vector<double>>& signals,
                                             double ts, LpNorm p, double slack = 0.02);

}  // namespace platoon_shield::control

#endif
