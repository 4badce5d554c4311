#pragma once

#include <cstdint>

#include "aclab/colour_system.hpp"
#include "aclab/extension.hpp"

namespace aclab {

struct FixtureOptions {
    int uncoloured = 0;
    RationalProb p{1, 2};
    // Give the first 2^(a_1 t_1 + ... + a_{i-1} t_{i-1}) colour-i vertices every
    // prescription in mask order; needs a_i at least that large.
    bool complete = false;
    // No colour-g edge touches an uncoloured vertex (and t_g must be 1).
    bool restricted = false;
};

// Coloured vertices first (by colour), then the uncoloured ones. Every other
// potential (pair, shade) edge is present independently with probability p.
ColourSystem random_colour_system(const ColourParams& params, const FixtureOptions& opt, std::uint64_t seed);

RestrictedColourSystem random_restricted_system(const ColourParams& params, const FixtureOptions& opt,
                                                std::uint64_t seed);

} // namespace aclab
