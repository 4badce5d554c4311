#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "aclab/graph.hpp"

namespace aclab {

struct MapQuery {
    bool injective = true;
    // Every pattern vertex must land in this set (all vertices when empty).
    std::optional<VertexSet> allowed;
    // (pattern vertex, graph vertex) pairs fixed in advance.
    std::vector<std::pair<int, int>> pins;
};

// Number of edge-preserving maps V(H) -> V(G) satisfying the query. Throws
// CapacityError when n^h >= 2^63.
std::int64_t count_maps(const PatternGraph& H, const Graph& G, const MapQuery& query);

void check_count_capacity(const PatternGraph& H, int n);

std::int64_t count_labelled_copies(const PatternGraph& H, const Graph& G);
std::int64_t count_homomorphisms(const PatternGraph& H, const Graph& G);
std::int64_t automorphism_count(const PatternGraph& H);

// Labelled copies in G + uv whose image contains uv; equals X(G+uv) - X(G-uv).
std::int64_t delta_edge(const PatternGraph& H, const Graph& G, int u, int v);

// As delta_edge, with every pattern vertex restricted to `allowed`.
std::int64_t copies_through_edge(const PatternGraph& H, const Graph& G, int u, int v,
                                 const std::optional<VertexSet>& allowed);

} // namespace aclab
