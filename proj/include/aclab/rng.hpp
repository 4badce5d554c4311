#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "aclab/rational.hpp"

namespace aclab {

using Engine = std::mt19937_64;

// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view text) noexcept
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Per-trial seed: mix64(mix64(base ^ mix64(fnv1a64(label))) + (trial + 1) * phi),
// phi = 0x9E3779B97F4A7C15 (odd). For fixed (base, label) the map from trial to
// seed is injective, so no two trials of one stream share a seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t trial) noexcept
{
    const std::uint64_t stream = mix64(base ^ mix64(fnv1a64(label)));
    return mix64(stream + (trial + 1) * 0x9E3779B97F4A7C15ULL);
}

// Exact Bernoulli(num/den) draws. Power-of-two denominators consume only
// log2(den) bits per draw; other denominators use rejection sampling on a
// uniform integer in [0, den).
class BernoulliStream {
public:
    BernoulliStream(Engine& engine, const RationalProb& p);

    bool next();

private:
    std::uint64_t uniform_below();

    Engine* engine_;
    std::uint64_t num_;
    std::uint64_t den_;
    unsigned shift_ = 0;     // log2(den) when den is a power of two
    bool pow2_ = false;
    std::uint64_t buffer_ = 0;
    unsigned bits_left_ = 0;
};

} // namespace aclab
