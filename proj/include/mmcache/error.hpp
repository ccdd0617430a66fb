#pragma once

#include <stdexcept>
#include <string>

namespace mmcache {

/// Raised when an iterative numerical routine fails to reach its tolerance.
/// Carries the best estimate obtained and the error bound achieved.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

}  // namespace detail
}  // namespace mmcache
