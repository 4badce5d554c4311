#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "aclab/colour_system.hpp"
#include "aclab/extension.hpp"

namespace aclab {

// A colour system with t_g = 1 and a single uncoloured vertex (the hub) joined
// to every coloured vertex in every shade of that vertex's colour.
class Core {
public:
    Core() = default;
    explicit Core(ColourSystem cs);

    const ColourSystem& system() const noexcept { return cs_; }
    int g() const noexcept { return cs_.g(); }
    int hub() const noexcept { return hub_; }
    const std::vector<ColourEdge>& edges() const noexcept { return cs_.edges(); }
    const ColourEdge& edge(int index) const { return cs_.edges().at(static_cast<std::size_t>(index)); }
    // -1 when absent.
    int edge_index(int u, int v, int colour, int shade) const;
    // Hub to colour-g edges, ordered by the colour-g vertex id.
    const std::vector<int>& top_edges() const noexcept { return top_edges_; }
    // (t_1, ..., t_{g-1}, 1)
    std::vector<int> shape() const { return cs_.params().shape(); }

private:
    ColourSystem cs_;
    int hub_ = -1;
    std::vector<int> top_edges_;
    std::map<std::tuple<int, int, int, int>, int> index_;
};

// Coloured vertices of rcs by (colour, id), then the hub.
Core core_of_restricted(const RestrictedColourSystem& rcs);

// cs has g-1 colours. Coloured vertices of cs by (colour, id), then one
// colour-g vertex per shade pattern in increasing mask order, then the hub.
// CapacityError past 2^16 patterns.
Core extended_core(const ColourSystem& cs);

// Id in extended_core(cs) of the colour-g vertex with the given pattern.
int extended_core_vertex(const ColourSystem& cs, std::uint64_t mask);

struct UPartition {
    std::vector<std::vector<int>> classes;   // indexed by pattern mask; uncoloured vertex ids
    std::uint64_t full_mask = 0;             // the all-shades pattern (U*)

    const std::vector<int>& star() const { return classes.at(static_cast<std::size_t>(full_mask)); }
    // The class containing vertex u, or -1.
    std::int64_t class_of(int u) const;
};

// cs has g-1 colours; classes follow the bit order of pattern_mask.
UPartition u_partition(const ColourSystem& cs);

// Uncoloured vertices joined to every lower-colour vertex in every shade
// (restricted systems: colours 1..g-1).
std::vector<int> u_star(const RestrictedColourSystem& rcs);

} // namespace aclab
