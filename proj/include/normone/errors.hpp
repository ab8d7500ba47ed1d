#pragma once

#include <stdexcept>
#include <string>

namespace normone {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad or inconsistent field/unit configuration, schema violations, invalid
// operation parameters.
struct ConfigError : Error {
    using Error::Error;
};

// A rounding decision fell inside the boundary guard band and could not be
// resolved exactly; callers may retry at higher precision.
struct PrecisionError : Error {
    explicit PrecisionError(const std::string& msg, long suggested_bits = 0)
        : Error(msg), suggested_bits(suggested_bits) {}
    long suggested_bits;
};

// A search box exceeded the configured memory budget.
struct ResourceError : Error {
    explicit ResourceError(const std::string& msg, double box_volume = 0.0)
        : Error(msg), box_volume(box_volume) {}
    double box_volume;
};

}  // namespace normone
