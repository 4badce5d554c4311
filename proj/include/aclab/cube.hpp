#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aclab/graph.hpp"
#include "aclab/rational.hpp"
#include "aclab/stats.hpp"

namespace aclab {

using CubePoint = std::vector<std::uint8_t>;

// f : {0,1}^N -> R^d. Evaluators must be reentrant. Without an explicit
// delta, delta(xi, i) evaluates f twice with coordinate i forced to 1 and 0.
class CubeFunction {
public:
    using Eval = std::function<std::vector<double>(const CubePoint&)>;
    using Delta = std::function<std::vector<double>(const CubePoint&, std::size_t)>;

    CubeFunction(std::size_t N, std::size_t d, Eval eval, Delta delta = {});

    std::size_t N() const noexcept { return N_; }
    std::size_t d() const noexcept { return d_; }
    std::vector<double> operator()(const CubePoint& xi) const;
    std::vector<double> delta(const CubePoint& xi, std::size_t i) const;

    // f(xi) = offset + sum_i xi_i coefficients[i]; coefficients has N rows of length d.
    static CubeFunction linear(std::vector<std::vector<double>> coefficients, std::vector<double> offset = {});
    // Labelled copies of H in the graph on n vertices whose pairs (lexicographic)
    // are the coordinates; d = 1.
    static CubeFunction subgraph_count(const PatternGraph& H, int n);

private:
    std::size_t N_;
    std::size_t d_;
    Eval eval_;
    Delta delta_;
};

// xi ~ Ber(p)^N drawn from derive_seed(seed, label, trial).
CubePoint sample_cube(std::size_t N, const RationalProb& p, std::uint64_t seed, std::string_view label,
                      std::uint64_t trial);

double sup_norm_distance(const std::vector<double>& a, const std::vector<double>& b);

struct DeltaProfile {
    std::size_t coordinate = 0;
    EstimationResult deviation;      // frequency of ||delta_i f - target||_inf >= r
    std::vector<double> mean;        // empirical mean of delta_i f
    double max_distance = 0.0;
};

DeltaProfile delta_profile(const CubeFunction& f, std::size_t i, const RationalProb& p,
                           const std::vector<double>& target, double r, std::uint64_t trials, std::uint64_t seed,
                           unsigned workers = 0);

// Pr(||f(xi) - x||_inf < radius).
EstimationResult small_ball_estimate(const CubeFunction& f, const std::vector<double>& x, double radius,
                                     const RationalProb& p, std::uint64_t trials, std::uint64_t seed,
                                     unsigned workers = 0);

struct HalaszConfig {
    std::vector<std::vector<Rational>> directions;     // m vectors of length d
    std::vector<std::vector<std::size_t>> classes;     // I_1..I_m, disjoint coordinates
    double epsilon = 0.0;
    double s = 1.0;
    double r = 1.0;
    std::vector<double> x;
    RationalProb p{1, 2};
    std::uint64_t trials = 10'000;
    std::uint64_t seed = 0;
    // Stand-in for the unreachable N^(-6 d^2) hypothesis level.
    double hypothesis_threshold = 1e-3;
    std::uint64_t hypothesis_trials = 1'000;
    std::size_t hypothesis_coordinates = 8;   // checked per class
};

struct HalaszReport {
    std::size_t N = 0;
    std::size_t d = 0;
    double radius = 0.0;             // r sqrt(N ln N)
    EstimationResult small_ball;
    double shape = 0.0;              // (r sqrt(ln N) / s)^d
    double fitted_c = 0.0;           // small-ball estimate / shape
    double hypothesis_max_frequency = 0.0;
    double hypothesis_threshold = 0.0;
    bool threshold_substituted = true;
    std::vector<std::string> warnings;
};

// ValidationError when the configuration breaks the probe's setup
// (overlapping or small classes, non-spanning directions, r sqrt(N ln N) < s).
HalaszReport halasz_report(const CubeFunction& f, const HalaszConfig& cfg, unsigned workers = 0);

// f = sum over coordinates of xi_i e_{class(i)}: d contiguous blocks of N/d
// coordinates, s = 1, r = 1/sqrt(N ln N), x the rounded mean.
std::pair<CubeFunction, HalaszConfig> linear_halasz_setup(std::size_t N, std::size_t d, const RationalProb& p,
                                                          std::uint64_t trials, std::uint64_t seed);

struct HalaszScaling {
    std::vector<HalaszReport> reports;
    double c_min = 0.0;
    double c_max = 0.0;
    double factor = 3.0;
    bool bounded = false;   // c_max <= factor * c_min
};

HalaszScaling halasz_scaling(const std::vector<std::size_t>& sizes,
                             const std::function<std::pair<CubeFunction, HalaszConfig>(std::size_t)>& setup,
                             double factor = 3.0, unsigned workers = 0);

nlohmann::json to_json(const EstimationResult& e);
nlohmann::json to_json(const HalaszReport& r);

} // namespace aclab
