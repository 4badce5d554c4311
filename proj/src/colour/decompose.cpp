#include "aclab/decompose.hpp"

#include <algorithm>

#include "aclab/errors.hpp"
#include "aclab/psi.hpp"
#include "aclab/structure.hpp"

namespace aclab {

Decomposition decompose(const ColourSystem& cs, const Graph& G0, const PatternGraph& H)
{
    require_valid(cs);
    const auto& U = cs.uncoloured();
    if (G0.n() != static_cast<int>(U.size()))
        throw ValidationError("G0 must have one vertex per uncoloured vertex");
    const int gm1 = cs.g();
    const int bits = cs.params().pattern_bits(gm1);
    if (bits > 16) throw CapacityError("decompose needs 2^" + std::to_string(bits) + " patterns (limit 2^16)");
    const std::size_t patterns = std::size_t{1} << bits;

    Decomposition out;
    out.W.assign(patterns, -1);
    for (int u : U) {
        const auto mask = pattern_mask(cs, u, gm1 + 1);
        if (out.W[mask] < 0) out.W[mask] = u;
    }
    for (std::size_t mask = 0; mask < patterns; ++mask)
        if (out.W[mask] < 0) throw ValidationError("pattern not represented: mask " + std::to_string(mask));

    std::vector<bool> inW(static_cast<std::size_t>(cs.order()), false);
    for (int w : out.W) inW[static_cast<std::size_t>(w)] = true;

    // cs without W
    std::vector<int> keep;
    for (int v = 0; v < cs.order(); ++v)
        if (!inW[static_cast<std::size_t>(v)]) keep.push_back(v);
    out.without_W = induced_system(cs, keep, cs.params());

    std::vector<int> rest_u;     // positions in U of the vertices outside W
    for (int k = 0; k < static_cast<int>(U.size()); ++k)
        if (!inW[static_cast<std::size_t>(U[static_cast<std::size_t>(k)])]) rest_u.push_back(k);
    out.G0_minus = G0.induced(rest_u);

    // cs with W recoloured g
    const int g = gm1 + 1;
    ColourParams P = cs.params();
    P.g = g;
    P.a.push_back(static_cast<int>(patterns));
    P.t.push_back(1);
    std::vector<int> colours = cs.colours();
    for (int w : out.W) colours[static_cast<std::size_t>(w)] = g;
    std::vector<ColourEdge> edges = cs.edges();
    std::vector<int> sortedW = out.W;
    std::sort(sortedW.begin(), sortedW.end());
    for (std::size_t i = 0; i < sortedW.size(); ++i)
        for (std::size_t j = i + 1; j < sortedW.size(); ++j) {
            const int a = sortedW[i], b = sortedW[j];
            if (G0.has_edge(cs.uncoloured_index(a), cs.uncoloured_index(b))) edges.push_back({a, b, g, 1});
        }
    out.with_top = RestrictedColourSystem(ColourSystem(P, std::move(colours), std::move(edges)));

    out.extension.vertices = out.with_top.top_vertices();
    for (int w : out.extension.vertices) {
        std::vector<int> s;
        for (int k : rest_u)
            if (G0.has_edge(cs.uncoloured_index(w), k)) s.push_back(U[static_cast<std::size_t>(k)]);
        out.extension.sets.push_back(std::move(s));
    }

    out.lhs = psi_table(H, cs, G0);
    out.rhs_extended = psi_table(H, apply_extension(out.with_top, out.extension), out.G0_minus);
    out.rhs_remainder = psi_table(H, out.without_W, out.G0_minus);
    // Shapes (t..., 1) and (t...) share the same row-major layout.
    out.identity_holds = out.lhs.size() == out.rhs_extended.size() && out.lhs.size() == out.rhs_remainder.size();
    for (std::size_t k = 0; out.identity_holds && k < out.lhs.size(); ++k)
        out.identity_holds = out.lhs[k] == out.rhs_extended[k] + out.rhs_remainder[k];
    return out;
}

} // namespace aclab
