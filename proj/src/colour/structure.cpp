#include "aclab/structure.hpp"

#include <cmath>

#include "aclab/errors.hpp"

namespace aclab {

std::uint64_t pattern_mask(const ColourSystem& cs, int w, int below)
{
    std::uint64_t mask = 0;
    int bit = 0;
    for (int j = 1; j < below && j <= cs.g(); ++j) {
        const int t = cs.params().t[static_cast<std::size_t>(j - 1)];
        for (int v : cs.colour_class(j)) {
            const std::uint64_t shades = cs.shades_between(w, v, j);
            for (int s = 0; s < t; ++s, ++bit)
                if ((shades >> s) & 1u) mask |= std::uint64_t{1} << bit;
        }
    }
    return mask;
}

bool is_complete(const ColourSystem& cs)
{
    for (int i = 1; i <= cs.g(); ++i) {
        const int bits = cs.params().pattern_bits(i - 1);
        if (bits > 20)
            throw CapacityError("completeness check needs 2^" + std::to_string(bits) +
                                " prescriptions for colour " + std::to_string(i) + " (limit 2^20)");
        std::vector<bool> realized(std::size_t{1} << bits, false);
        for (int w : cs.colour_class(i)) realized[pattern_mask(cs, w, i)] = true;
        for (std::size_t prescription = 0; prescription < realized.size(); ++prescription)
            if (!realized[prescription]) return false;
    }
    return true;
}

SetFamily neighbourhood_family(const ColourSystem& cs, int max_colour)
{
    SetFamily fam;
    fam.ground = cs.uncoloured();
    const int R = static_cast<int>(fam.ground.size());
    // index of the first set belonging to each coloured vertex
    std::vector<int> first(static_cast<std::size_t>(cs.order()), -1);
    int m = 0;
    for (int j = 1; j <= max_colour && j <= cs.g(); ++j)
        for (int v : cs.colour_class(j)) {
            first[static_cast<std::size_t>(v)] = m;
            m += cs.params().t[static_cast<std::size_t>(j - 1)];
        }
    fam.sets.assign(static_cast<std::size_t>(m), VertexSet(R));
    for (const auto& e : cs.edges()) {
        int c = e.u, u = e.v;
        if (cs.is_coloured(u)) std::swap(c, u);
        if (cs.is_coloured(u) || !cs.is_coloured(c)) continue;
        if (cs.colour(c) > max_colour || e.colour != cs.colour(c)) continue;
        const int base = first[static_cast<std::size_t>(c)];
        if (base < 0 || e.shade < 1 || e.shade > cs.params().t[static_cast<std::size_t>(e.colour - 1)]) continue;
        fam.sets[static_cast<std::size_t>(base + e.shade - 1)].insert(cs.uncoloured_index(u));
    }
    return fam;
}

GeneralPositionReport general_position_check(const SetFamily& family, const RationalProb& p, int K)
{
    if (K < 1) throw ValidationError("general position needs K >= 1");
    const int m = family.m();
    if (m > 20) throw CapacityError("general position check needs 2^" + std::to_string(m) + " cells (limit 2^20)");
    GeneralPositionReport rep;
    rep.m = m;
    rep.K = K;
    const std::int64_t R = static_cast<std::int64_t>(family.ground.size());
    rep.ground_size = R;
    rep.cell_sizes.assign(std::size_t{1} << m, 0);
    for (std::int64_t r = 0; r < R; ++r) {
        std::uint32_t cell = 0;
        for (int i = 0; i < m; ++i)
            if (family.sets[static_cast<std::size_t>(i)].contains(static_cast<int>(r))) cell |= 1u << i;
        ++rep.cell_sizes[cell];
    }
    rep.threshold = R > 0 ? K * std::sqrt(static_cast<double>(R)) * std::log(static_cast<double>(R)) : 0.0;
    const double q = p.to_double();
    for (std::uint32_t cell = 0; cell < rep.cell_sizes.size(); ++cell) {
        const int k = std::popcount(cell);
        const double expected = std::pow(q, k) * std::pow(1.0 - q, m - k) * static_cast<double>(R);
        const double dev = std::fabs(static_cast<double>(rep.cell_sizes[cell]) - expected);
        if (cell == 0 || dev > rep.worst_deviation) {
            rep.worst_deviation = dev;
            rep.worst_cell = cell;
        }
    }
    rep.slack = rep.threshold - rep.worst_deviation;
    rep.pass = rep.worst_deviation <= rep.threshold;
    return rep;
}

std::string to_string(Generality g)
{
    switch (g) {
    case Generality::PGeneral: return "p-general";
    case Generality::WeaklyPGeneral: return "weakly p-general";
    case Generality::Neither: return "neither";
    }
    return "neither";
}

Generality classify_family(const SetFamily& family, const RationalProb& p, int colours)
{
    int K = 1;
    for (int i = 0; i < colours; ++i) K *= 3;
    if (general_position_check(family, p, K).pass) return Generality::PGeneral;
    if (general_position_check(family, p, 2 * K).pass) return Generality::WeaklyPGeneral;
    return Generality::Neither;
}

Generality classify_generality(const ColourSystem& cs, const RationalProb& p)
{
    return classify_family(neighbourhood_family(cs), p, cs.g());
}

} // namespace aclab
