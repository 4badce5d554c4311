#include "aclab/stats.hpp"

#include <algorithm>
#include <cmath>

namespace aclab {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z)
{
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (phat + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    Interval out{std::max(0.0, centre - half), std::min(1.0, centre + half)};
    // Keep the point estimate inside even under rounding at the boundaries.
    out.low = std::min(out.low, phat);
    out.high = std::max(out.high, phat);
    return out;
}

EstimationResult make_estimate(std::uint64_t successes, std::uint64_t trials, std::uint64_t base_seed)
{
    EstimationResult r;
    r.successes = successes;
    r.trials = trials;
    r.base_seed = base_seed;
    r.estimate = trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
    r.interval = wilson_interval(successes, trials);
    return r;
}

} // namespace aclab
