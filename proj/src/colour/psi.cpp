#include "aclab/psi.hpp"

#include "aclab/counting.hpp"
#include "aclab/errors.hpp"

namespace aclab {

namespace {

// allowed[A] = all vertices outside the colour classes in A
std::vector<VertexSet> avoid_sets(const ColourSystem& cs)
{
    const int g = cs.g();
    std::vector<VertexSet> out(std::size_t{1} << g, VertexSet::full(cs.order()));
    for (std::uint32_t A = 0; A < out.size(); ++A)
        for (int i = 1; i <= g; ++i)
            if ((A >> (i - 1)) & 1u)
                for (int v : cs.colour_class(i)) out[A].erase(v);
    return out;
}

std::int64_t psi_on(const PatternGraph& H, const Graph& realized, const std::vector<VertexSet>& avoid)
{
    std::int64_t total = 0;
    for (std::uint32_t A = 0; A < avoid.size(); ++A) {
        MapQuery q;
        if (A != 0) q.allowed = avoid[A];
        const std::int64_t c = count_maps(H, realized, q);
        total += (std::popcount(A) % 2 == 0) ? c : -c;
    }
    return total;
}

std::int64_t kappa_on(const PatternGraph& H, const Graph& realized, const std::vector<VertexSet>& avoid, int u, int v)
{
    std::int64_t total = 0;
    for (std::uint32_t A = 0; A < avoid.size(); ++A) {
        if (!avoid[A].contains(u) || !avoid[A].contains(v)) continue;
        std::optional<VertexSet> allowed;
        if (A != 0) allowed = avoid[A];
        const std::int64_t c = copies_through_edge(H, realized, u, v, allowed);
        total += (std::popcount(A) % 2 == 0) ? c : -c;
    }
    return total;
}

void check_colours(const ColourSystem& cs)
{
    if (cs.g() > 16) throw CapacityError("psi inclusion-exclusion is limited to 16 colours");
}

} // namespace

std::int64_t psi_entry(const PatternGraph& H, const ColourSystem& cs, const Graph& G0, const ShadeTuple& shades)
{
    check_colours(cs);
    check_count_capacity(H, cs.order());
    return psi_on(H, realize(cs, G0, shades), avoid_sets(cs));
}

IntTable psi_table(const PatternGraph& H, const ColourSystem& cs, const Graph& G0)
{
    check_colours(cs);
    check_count_capacity(H, cs.order());
    const auto avoid = avoid_sets(cs);
    IntTable out(cs.params().shape());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = psi_on(H, realize(cs, G0, out.tuple_at(k)), avoid);
    return out;
}

std::int64_t kappa(const PatternGraph& H, const ColourSystem& cs, const Graph& G0, const ShadeTuple& shades, int u,
                   int v)
{
    check_colours(cs);
    if (u == v) throw ValidationError("kappa needs two distinct vertices");
    if (u < 0 || v < 0 || u >= cs.order() || v >= cs.order()) throw ValidationError("kappa vertex out of range");
    return kappa_on(H, realize(cs, G0, shades), avoid_sets(cs), u, v);
}

IntTable kappa_table(const PatternGraph& H, const ColourSystem& cs, const Graph& G0, int u, int v)
{
    check_colours(cs);
    if (u == v) throw ValidationError("kappa needs two distinct vertices");
    if (u < 0 || v < 0 || u >= cs.order() || v >= cs.order()) throw ValidationError("kappa vertex out of range");
    const auto avoid = avoid_sets(cs);
    IntTable out(cs.params().shape());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = kappa_on(H, realize(cs, G0, out.tuple_at(k)), avoid, u, v);
    return out;
}

} // namespace aclab
