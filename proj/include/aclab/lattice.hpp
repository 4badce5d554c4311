#pragma once

#include <cstdint>
#include <vector>

#include "aclab/rational.hpp"

namespace aclab {

inline constexpr std::uint64_t kLatticeBoxLimit = 10'000'000;

struct LatticeCount {
    std::uint64_t count = 0;
    std::vector<std::int64_t> low;    // enumerated box, inclusive
    std::vector<std::int64_t> high;
    std::uint64_t box_points = 0;
};

// Integer tuples t with || sum_i t_i basis[i] - target ||_inf < z. basis holds
// d vectors of length d. ValidationError for a dependent basis or z < 1;
// CapacityError when the candidate box exceeds kLatticeBoxLimit points.
LatticeCount lattice_count(const std::vector<std::vector<Rational>>& basis, const std::vector<Rational>& target,
                           const Rational& z);

} // namespace aclab
