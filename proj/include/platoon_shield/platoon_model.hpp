#ifndef PLATOON_SHIELD_PLATOON_MODEL_HPP
#define PLATOON_SHIELD_PLATOON_MODEL_HPP

#include <array>
#include <span>
#include <utility>

#include "platoon_shield/numerics.hpp"

namespace platoon_shield::model {

using numerics::Matrix;

/// Per-vehicle constants. Units: seconds for h and tau, meters for r and
/// length.
struct VehicleParams {
    double h;             // headway time constant, > 0
    double tau;           // driveline time constant, > 0
    double r = 0.0;       // standstill distance
    double length = 0.0;  // vehicle length, >= 0

    void validate() const;
};

/// PD gains of the spacing controller (no jerk feedback).
struct ControllerGains {
    double kp;
    double kd;

    /// kp > 0, kd > 0 and kd > kp * tau of the owning vehicle.
    bool valid_for(double tau) const { return kp > 0.0 && kd > 0.0 && kd > kp * tau; }
};

/// State of one vehicle: spacing error e [m], velocity v [m/s],
/// acceleration a [m/s^2], controller state u [m/s^2].
struct VehicleState {
    double e = 0.0;
    double v = 0.0;
    double a = 0.0;
    double u = 0.0;

    std::array<double, 4> as_array() const { return {e, v, a, u}; }
    static VehicleState from_array(const std::array<double, 4>& x) { return {x[0], x[1], x[2], x[3]}; }
    bool finite() const;
};

/// Exact ZOH discretization of a continuous-time pair at period ts.
struct DiscretePlant {
    Matrix ad;
    Matrix bd;
    double ts;
};

/// Closed-loop follower dynamics. States [e, v, a, u]; inputs
/// [distance-sensor noise, predecessor velocity (+ sensor noise),
/// predecessor command (+ fusion error)].
///
///   Ac = [ 0    -1     -h      0   ]      Bc = [ 0     1     0  ]
///        [ 0     0      1      0   ]           [ 0     0     0  ]
///        [ 0     0    -1/tau  1/tau]           [ 0     0     0  ]
///        [kp/h -kd/h  -kd    -1/h  ]           [kp/h  kd/h  1/h ]
std::pair<Matrix, Matrix> build_follower(const VehicleParams& params, const ControllerGains& gains);

/// Virtual reference vehicle that the lead vehicle follows, driven by the
/// desired acceleration of the (human) driver. Its spacing-error row is
/// zero, so Ac is singular.
std::pair<Matrix, Matrix> build_leader(const VehicleParams& params);

DiscretePlant discretize(const Matrix& ac, const Matrix& bc, double ts);

/// One sampling period: x(k+1) = Ad x(k) + Bd input(k).
VehicleState step(const VehicleState& state, std::span<const double> input, const DiscretePlant& plant);

/// Spacing policy: r + h * v.
double desired_distance(const VehicleParams& params, double v);

}  // namespace platoon_shield::model

#endif
