#include "platoon_shield/platoon_model.hpp"

#include <cmath>

#include "platoon_shield/errors.hpp"

namespace platoon_shield::model {

void VehicleParams::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("VehicleParams: headway h must be > 0");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("VehicleParams: driveline tau must be > 0");
    if (!(length >= 0.0) || !std::isfinite(length)) throw ConfigError("VehicleParams: length must be >= 0");
    if (!std::isfinite(r)) throw ConfigError("VehicleParams: standstill distance must be finite");
}

bool VehicleState::finite() const {
    return std::isfinite(e) && std::isfinite(v) && std::isfinite(a) && std::isfinite(u);
}

std::pair<Matrix, Matrix> build_follower(const VehicleParams& params, const ControllerGains& gains) {
    params.validate();
    if (!gains.valid_for(params.tau)) {
        throw ConfigError("build_follower: gains must satisfy kp > 0, kd > 0, kd > kp*tau");
    }
    const double h = params.h;
    const double tau = params.tau;
    const Matrix ac(4, 4,
                    {0.0, -1.0, -h, 0.0,
                     0.0, 0.0, 1.0, 0.0,
                     0.0, 0.0, -1.0 / tau, 1.0 / tau,
                     gains.kp / h, -gains.kd / h, -gains.kd, -1.0 / h});
    const Matrix bc(4, 3,
                    {0.0, 1.0, 0.0,
                     0.0, 0.0, 0.0,
                     0.0, 0.0, 0.0,
                     gains.kp / h, gains.kd / h, 1.0 / h});
    return {ac, bc};
}

std::pair<Matrix, Matrix> build_leader(const VehicleParams& params) {
    params.validate();
    const double h = params.h;
    const double tau = params.tau;
    const Matrix ac(4, 4,
                    {0.0, 0.0, 0.0, 0.0,
                     0.0, 0.0, 1.0, 0.0,
                     0.0, 0.0, -1.0 / tau, 1.0 / tau,
                     0.0, 0.0, 0.0, -1.0 / h});
    const Matrix bc(4, 1, {0.0, 0.0, 0.0, 1.0 / h});
    return {ac, bc};
}

DiscretePlant discretize(const Matrix& ac, const Matrix& bc, double ts) {
    auto [ad, bd] = numerics::zoh_discretize(ac, bc, ts);
    return {std::move(ad), std::move(bd), ts};
}

VehicleState step(const VehicleState& state, std::span<const double> input, const DiscretePlant& plant) {
    if (plant.ad.rows() != 4 || plant.ad.cols() != 4 || plant.bd.rows() != 4) {
        throw DimensionError("step: plant is not a 4-state model");
    }
    if (plant.bd.cols() != input.size()) throw DimensionError("step: input length != plant input count");

    const std::array<double, 4> x = state.as_array();
    std::array<double, 4> next{};
    for (std::size_t row = 0; row < 4; ++row) {
        double s = 0.0;
        for (std::size_t col = 0; col < 4; ++col) s += plant.ad(row, col) * x[col];
        for (std::size_t col = 0; col < input.size(); ++col) s += plant.bd(row, col) * input[col];
        next[row] = s;
    }
    return VehicleState::from_array(next);
}

double desired_distance(const VehicleParams& params, double v) {
    return params.r + params.h * v;
}

}  // namespace platoon_shield::model
