#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aclab/colour_system.hpp"
#include "aclab/rational.hpp"

namespace aclab {

// Shade pattern of w towards the coloured vertices of colours 1..below-1.
// Bit order: colour, then vertex (id order), then shade; the same order as
// neighbourhood_family.
std::uint64_t pattern_mask(const ColourSystem& cs, int w, int below);

// Every prescription of shade sets towards lower colours is realized by some
// vertex of each colour. CapacityError past 2^20 prescriptions per colour.
bool is_complete(const ColourSystem& cs);

struct SetFamily {
    std::vector<int> ground;        // vertex ids
    std::vector<VertexSet> sets;    // over positions in `ground`

    int m() const noexcept { return static_cast<int>(sets.size()); }
};

// One set per (coloured vertex, shade of its colour) over colours 1..max_colour,
// ordered by colour, vertex id, shade; ground set U in id order.
SetFamily neighbourhood_family(const ColourSystem& cs, int max_colour);
inline SetFamily neighbourhood_family(const ColourSystem& cs) { return neighbourhood_family(cs, cs.g()); }

struct GeneralPositionReport {
    bool pass = true;
    int m = 0;
    std::int64_t ground_size = 0;
    int K = 1;
    double threshold = 0.0;          // K |R|^{1/2} ln |R|
    double worst_deviation = 0.0;
    std::uint32_t worst_cell = 0;    // bit i set iff set i is in I
    double slack = 0.0;              // threshold - worst_deviation
    std::vector<std::int64_t> cell_sizes;
};

// Capacity guard m <= 20.
GeneralPositionReport general_position_check(const SetFamily& family, const RationalProb& p, int K);

enum class Generality { PGeneral, WeaklyPGeneral, Neither };
std::string to_string(Generality g);

// K = 3^colours and 2 * 3^colours.
Generality classify_family(const SetFamily& family, const RationalProb& p, int colours);
Generality classify_generality(const ColourSystem& cs, const RationalProb& p);

} // namespace aclab
