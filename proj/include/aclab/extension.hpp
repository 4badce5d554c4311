#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "aclab/colour_system.hpp"
#include "aclab/stats.hpp"
#include "aclab/structure.hpp"

namespace aclab {

// A colour system with t_g = 1 and no colour-g edge between a coloured and an
// uncoloured vertex. The constructor throws ValidationError otherwise.
class RestrictedColourSystem {
public:
    RestrictedColourSystem() = default;
    explicit RestrictedColourSystem(ColourSystem cs);

    const ColourSystem& system() const noexcept { return cs_; }
    int g() const noexcept { return cs_.g(); }
    int order() const noexcept { return cs_.order(); }
    const std::vector<int>& top_vertices() const { return cs_.colour_class(cs_.g()); }

private:
    ColourSystem cs_;
};

// S_v for each colour-g vertex v; sets hold uncoloured vertex ids, sorted.
struct Extension {
    std::vector<int> vertices;
    std::vector<std::vector<int>> sets;

    friend bool operator==(const Extension&, const Extension&) = default;
};

// Coin order: colour-g vertices by id, then uncoloured vertices by id.
Extension sample_extension(const RestrictedColourSystem& rcs, const RationalProb& p, std::uint64_t seed);

// Adds a shade-1 colour-g edge from each v to every member of S_v.
ColourSystem apply_extension(const RestrictedColourSystem& rcs, const Extension& ext);

struct ExtendedSystem {
    Extension extension;
    ColourSystem system;
};

ExtendedSystem extend_restricted(const RestrictedColourSystem& rcs, const RationalProb& p, std::uint64_t seed);

// Neighbourhood family of colours 1..g-1 and its generality class with K = 3^(g-1).
SetFamily essential_family(const RestrictedColourSystem& rcs);
Generality essential_generality(const RestrictedColourSystem& rcs, const RationalProb& p);

// Colour-g vertices deleted; parameters (g-1, a_1..a_{g-1}, t_1..t_{g-1}).
ColourSystem ignore_top_colour(const RestrictedColourSystem& rcs);

struct DispersednessReport {
    EstimationResult max_frequency;
    IntTable attaining;             // the most frequent psi-table
    std::size_t distinct_tables = 0;
    double q = 0.0;
    bool dispersed = false;         // max frequency + CI half-width <= q
    std::vector<std::string> warnings;
};

// Trial t draws S with seed derive_seed(seed, "extension", t).
DispersednessReport dispersedness_estimate(const RestrictedColourSystem& rcs, const Graph& G0, const PatternGraph& H,
                                           const RationalProb& p, double q, std::uint64_t trials, std::uint64_t seed,
                                           unsigned workers = 0);

nlohmann::json to_json(const Extension& ext);
Extension extension_from_json(const nlohmann::json& j);

} // namespace aclab
