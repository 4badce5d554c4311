#pragma once

#include <cstdint>

#include "aclab/colour_system.hpp"
#include "aclab/graph.hpp"
#include "aclab/table.hpp"

namespace aclab {

// Labelled copies of H in realize(cs, G0, j) meeting every colour class, one
// entry per shade tuple. Colour classes are handled by inclusion-exclusion.
IntTable psi_table(const PatternGraph& H, const ColourSystem& cs, const Graph& G0);
std::int64_t psi_entry(const PatternGraph& H, const ColourSystem& cs, const Graph& G0, const ShadeTuple& shades);

// Copies in realize(cs, G0, j) + uv that use uv and meet every colour class.
std::int64_t kappa(const PatternGraph& H, const ColourSystem& cs, const Graph& G0, const ShadeTuple& shades, int u,
                   int v);
IntTable kappa_table(const PatternGraph& H, const ColourSystem& cs, const Graph& G0, int u, int v);

} // namespace aclab
