#pragma once

#include <vector>

#include "aclab/colour_system.hpp"
#include "aclab/extension.hpp"

namespace aclab {

struct Decomposition {
    // One representative per shade pattern (lowest id), listed by pattern mask.
    std::vector<int> W;
    RestrictedColourSystem with_top;    // W recoloured g, G0[W] as colour-g edges
    ColourSystem without_W;             // W deleted, ids compacted
    Graph G0_minus;                     // G0 on U \ W, in id order
    Extension extension;                // S_w = G0-neighbours of w in U \ W
    IntTable lhs;                       // psi(cs, G0)
    IntTable rhs_extended;              // psi(with_top_S, G0_minus, ., 1)
    IntTable rhs_remainder;             // psi(without_W, G0_minus)
    bool identity_holds = false;
};

// cs has g-1 colours. Throws ValidationError("pattern not represented") when
// some shade pattern has no uncoloured witness, CapacityError past 2^16 patterns.
Decomposition decompose(const ColourSystem& cs, const Graph& G0, const PatternGraph& H);

} // namespace aclab
