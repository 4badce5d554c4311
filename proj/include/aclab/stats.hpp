#pragma once

#include <cstdint>

namespace aclab {

struct Interval {
    double low = 0.0;
    double high = 0.0;

    double half_width() const noexcept { return 0.5 * (high - low); }
    bool contains(double x) const noexcept { return low <= x && x <= high; }
};

inline constexpr double kZ95 = 1.959963984540054;

// Wilson score interval for `successes` out of `trials` Bernoulli outcomes.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

struct EstimationResult {
    double estimate = 0.0;
    Interval interval;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    std::uint64_t base_seed = 0;
};

EstimationResult make_estimate(std::uint64_t successes, std::uint64_t trials, std::uint64_t base_seed);

} // namespace aclab
