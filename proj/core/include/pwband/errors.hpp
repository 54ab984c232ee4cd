#pragma once

#include <stdexcept>
#include <string>

namespace pwband {

/// Invalid argument: wrong dimensions, out-of-range risks, malformed collections.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A Gram matrix too close to singular for a faithful solve.
class ConditioningError : public std::runtime_error {
public:
    ConditioningError(const std::string &what, double condition_estimate)
        : std::runtime_error(what), condition_estimate_(condition_estimate) {}

    [[nodiscard]] double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

/// A numerical routine failed to bracket or converge.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pwband
