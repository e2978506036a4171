#ifndef PLATOON_SHIELD_ERRORS_HPP
#define PLATOON_SHIELD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace platoon_shield {

/// Matrix/vector dimensions do not match the operation.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of the operation (non-finite
/// entries, non-positive sampling period, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Iterative numeric routine failed to converge.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid scenario/link/controller configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested fusion with q >= N/2 attacked channels: the transmitted
/// command is not uniquely determined by the received copies.
class ReconstructibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Simulation state became non-finite.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, long step)
        : std::runtime_error(what), step_(step) {}
    long step() const { return step_; }

private:
    long step_;
};

}  // namespace platoon_shield

#endif
