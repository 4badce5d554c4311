#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "aclab/colour_system.hpp"
#include "aclab/extension.hpp"
#include "aclab/graph.hpp"
#include "aclab/table.hpp"

namespace aclab {

inline constexpr std::uint64_t kExpectationBudget = 100'000'000;

// What expected_copies averages over and which placements it keeps.
struct CopyQuery {
    // Colour-g to uncoloured pairs are independent p-coins instead of fixed
    // edges (averaging over the extension as well as G0).
    bool random_top = false;
    // (H vertex, system vertex) pins.
    std::vector<std::pair<int, int>> pins;
    // A pair (uncoloured, coloured) treated as an edge regardless of the system.
    std::optional<std::pair<int, int>> forced;
};

// Expected number, over G0 ~ G(U, p), of injective placements of H in
// realize(sys, G0, j) that meet every colour class and honour the query.
// Computed by linearity: coloured vertices are placed explicitly, uncoloured
// ones are counted through set-partition inclusion-exclusion.
// CapacityError when the work exceeds kExpectationBudget terms.
RationalTable expected_copies(const ColourSystem& sys, const PatternGraph& H, const RationalProb& p,
                              const CopyQuery& query = {});

// E_G0 psi_H(G_S, G0, .)
RationalTable exact_mu(const RestrictedColourSystem& rcs, const Extension& S, const PatternGraph& H,
                       const RationalProb& p);

// E_{G0, S} psi_H(G_S, G0, .)
RationalTable exact_mu_averaged(const RestrictedColourSystem& rcs, const PatternGraph& H, const RationalProb& p);

// E_G0 kappa_H(G_S, G0, ., u, v) for uncoloured u and colour-g v.
RationalTable exact_nu(const RestrictedColourSystem& rcs, const Extension& S, const PatternGraph& H,
                       const RationalProb& p, int u, int v);

} // namespace aclab
