#pragma once

#include <cstdint>
#include <map>

#include "aclab/graph.hpp"
#include "aclab/rational.hpp"
#include "aclab/stats.hpp"

namespace aclab {

// Pairs (u, v), u < v, are visited in lexicographic order, one Bernoulli
// draw each, from an mt19937_64 seeded with `seed`.
Graph sample_gnp(int n, const RationalProb& p, std::uint64_t seed);

struct ExactDistribution {
    PatternGraph pattern;
    int n = 0;
    RationalProb p;
    std::map<std::int64_t, Rational> support;

    Rational total() const;
    Rational mean() const;
    Rational max_point_probability() const;
};

inline constexpr int kDefaultExhaustivePairs = 24;

// Walks all 2^C(n,2) graphs in Gray-code order. Throws CapacityError when
// C(n,2) exceeds `max_pairs`.
ExactDistribution exact_distribution(const PatternGraph& H, int n, const RationalProb& p,
                                     int max_pairs = kDefaultExhaustivePairs);

// n (n-1) ... (n-h+1) p^e(H)
Rational expected_count(const PatternGraph& H, int n, const RationalProb& p);

struct PointProbEstimate {
    std::int64_t mode = 0;
    EstimationResult result;
    std::map<std::int64_t, std::uint64_t> histogram;
};

// Trial t samples G(n, p) with seed derive_seed(seed, "gnp", t). Ties for the
// mode go to the smaller count.
PointProbEstimate point_prob_estimate(const PatternGraph& H, int n, const RationalProb& p, std::uint64_t trials,
                                      std::uint64_t seed, unsigned workers = 0);

} // namespace aclab
