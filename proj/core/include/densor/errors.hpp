// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace densor {

/// Truncation index too small for the requested water level or rate.
/// Carries a usable replacement for K_max.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, std::size_t suggested_k_max)
        : std::runtime_error(what), suggested_k_max_(suggested_k_max) {}
    std::size_t suggested_k_max() const noexcept { return suggested_k_max_; }

private:
    std::size_t suggested_k_max_;
};

/// Requested rate lies outside the invertible range of the rate curve.
/// Carries the achievable rate interval.
class RateRangeError : public std::runtime_error {
public:
    RateRangeError(const std::string& what, double rate_min, double rate_max)
        : std::runtime_error(what), rate_min_(rate_min), rate_max_(rate_max) {}
    double rate_min() const noexcept { return rate_min_; }
    double rate_max() const noexcept { return rate_max_; }

private:
    double rate_min_;
    double rate_max_;
};

/// Power schedule falls outside the regime an operation requires.
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario-file problems: parse errors, unknown keys, out-of-range values.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace densor
