#include "aclab/core.hpp"

#include <algorithm>

#include "aclab/errors.hpp"
#include "aclab/structure.hpp"

namespace aclab {

Core::Core(ColourSystem cs) : cs_(std::move(cs))
{
    require_valid(cs_);
    const int g = cs_.g();
    if (g >= 1 && cs_.params().t.back() != 1) throw ValidationError("a core needs t_g = 1");
    if (cs_.uncoloured().size() != 1) throw ValidationError("a core has exactly one uncoloured vertex");
    hub_ = cs_.uncoloured().front();
    for (std::size_t k = 0; k < cs_.edges().size(); ++k) {
        const auto& e = cs_.edges()[k];
        index_[{std::min(e.u, e.v), std::max(e.u, e.v), e.colour, e.shade}] = static_cast<int>(k);
    }
    for (int i = 1; i <= g; ++i)
        for (int v : cs_.colour_class(i)) {
            const auto t = static_cast<unsigned>(cs_.params().t[static_cast<std::size_t>(i - 1)]);
            const std::uint64_t all = t >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << t) - 1;
            if (cs_.shades_between(hub_, v, i) != all)
                throw ValidationError("core hub is not joined to vertex " + std::to_string(v) + " in every shade");
        }
    if (g >= 1)
        for (int w : cs_.colour_class(g)) top_edges_.push_back(edge_index(hub_, w, g, 1));
}

int Core::edge_index(int u, int v, int colour, int shade) const
{
    auto it = index_.find({std::min(u, v), std::max(u, v), colour, shade});
    return it == index_.end() ? -1 : it->second;
}

namespace {

void add_hub_edges(const ColourSystem& base, int hub, std::vector<ColourEdge>& edges)
{
    for (int v = 0; v < hub; ++v) {
        const int c = base.colour(v);
        for (int s = 1; s <= base.params().t[static_cast<std::size_t>(c - 1)]; ++s) edges.push_back({v, hub, c, s});
    }
}

} // namespace

Core core_of_restricted(const RestrictedColourSystem& rcs)
{
    const auto& cs = rcs.system();
    std::vector<int> keep = cs.coloured_vertices();
    const ColourSystem coloured_only = induced_system(cs, keep, cs.params());
    std::vector<int> colours = coloured_only.colours();
    const int hub = static_cast<int>(colours.size());
    colours.push_back(kUncoloured);
    std::vector<ColourEdge> edges = coloured_only.edges();
    add_hub_edges(coloured_only, hub, edges);
    return Core(ColourSystem(cs.params(), std::move(colours), std::move(edges)));
}

Core extended_core(const ColourSystem& cs)
{
    const int gm1 = cs.g();
    const int bits = cs.params().pattern_bits(gm1);
    if (bits > 16) throw CapacityError("extended core needs 2^" + std::to_string(bits) + " colour-g vertices (limit 2^16)");
    const int top = 1 << bits;

    const std::vector<int> keep = cs.coloured_vertices();
    const ColourSystem coloured_only = induced_system(cs, keep, cs.params());
    const int C = static_cast<int>(keep.size());
    const int g = gm1 + 1;

    ColourParams P = cs.params();
    P.g = g;
    P.a.push_back(top);
    P.t.push_back(1);
    std::vector<int> colours = coloured_only.colours();
    colours.insert(colours.end(), static_cast<std::size_t>(top), g);
    const int hub = C + top;
    colours.push_back(kUncoloured);

    std::vector<ColourEdge> edges = coloured_only.edges();
    for (int k = 0; k < top; ++k) {
        int bit = 0;
        for (int v = 0; v < C; ++v) {
            const int c = coloured_only.colour(v);
            for (int s = 1; s <= P.t[static_cast<std::size_t>(c - 1)]; ++s, ++bit)
                if ((k >> bit) & 1) edges.push_back({v, C + k, c, s});
        }
    }
    for (int v = 0; v < hub; ++v) {
        const int c = colours[static_cast<std::size_t>(v)];
        for (int s = 1; s <= P.t[static_cast<std::size_t>(c - 1)]; ++s) edges.push_back({v, hub, c, s});
    }
    return Core(ColourSystem(P, std::move(colours), std::move(edges)));
}

int extended_core_vertex(const ColourSystem& cs, std::uint64_t mask)
{
    return static_cast<int>(cs.coloured_vertices().size() + mask);
}

std::int64_t UPartition::class_of(int u) const
{
    for (std::size_t k = 0; k < classes.size(); ++k)
        if (std::binary_search(classes[k].begin(), classes[k].end(), u)) return static_cast<std::int64_t>(k);
    return -1;
}

UPartition u_partition(const ColourSystem& cs)
{
    const int bits = cs.params().pattern_bits(cs.g());
    if (bits > 16) throw CapacityError("u_partition needs 2^" + std::to_string(bits) + " classes (limit 2^16)");
    UPartition out;
    out.classes.assign(std::size_t{1} << bits, {});
    out.full_mask = (std::uint64_t{1} << bits) - 1;
    for (int u : cs.uncoloured()) out.classes[pattern_mask(cs, u, cs.g() + 1)].push_back(u);
    return out;
}

std::vector<int> u_star(const RestrictedColourSystem& rcs)
{
    const auto& cs = rcs.system();
    const int bits = cs.params().pattern_bits(cs.g() - 1);
    const std::uint64_t full = bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    std::vector<int> out;
    for (int u : cs.uncoloured())
        if (pattern_mask(cs, u, cs.g()) == full) out.push_back(u);
    return out;
}

} // namespace aclab
