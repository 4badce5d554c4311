#include "aclab/fixtures.hpp"

#include "aclab/errors.hpp"
#include "aclab/rng.hpp"

namespace aclab {

ColourSystem random_colour_system(const ColourParams& params, const FixtureOptions& opt, std::uint64_t seed)
{
    params.check();
    if (opt.uncoloured < 0) throw ValidationError("uncoloured vertex count must be nonnegative");
    if (opt.restricted && (params.g < 1 || params.t.back() != 1))
        throw ValidationError("restricted fixtures need g >= 1 and t_g = 1");
    Engine engine(seed);
    BernoulliStream coin(engine, opt.p);

    std::vector<int> colours;
    for (int i = 1; i <= params.g; ++i) colours.insert(colours.end(), static_cast<std::size_t>(params.a[static_cast<std::size_t>(i - 1)]), i);
    const int coloured = static_cast<int>(colours.size());
    colours.insert(colours.end(), static_cast<std::size_t>(opt.uncoloured), kUncoloured);
    const int N = static_cast<int>(colours.size());
    auto t_of = [&](int c) { return params.t[static_cast<std::size_t>(c - 1)]; };

    std::vector<ColourEdge> edges;
    std::vector<int> rank(static_cast<std::size_t>(N), 0);   // position within its colour class
    for (int v = 1; v < coloured; ++v)
        if (colours[static_cast<std::size_t>(v)] == colours[static_cast<std::size_t>(v - 1)])
            rank[static_cast<std::size_t>(v)] = rank[static_cast<std::size_t>(v - 1)] + 1;

    for (int w = 0; w < coloured; ++w) {
        const int cw = colours[static_cast<std::size_t>(w)];
        const int bits = params.pattern_bits(cw - 1);
        const bool prescribed = opt.complete && bits < 31 && rank[static_cast<std::size_t>(w)] < (1 << bits);
        if (opt.complete && bits >= 31) throw CapacityError("complete fixture needs too many vertices");
        if (opt.complete && params.a[static_cast<std::size_t>(cw - 1)] < (1 << bits))
            throw ValidationError("complete fixture needs a_" + std::to_string(cw) + " >= 2^" + std::to_string(bits));
        int bit = 0;
        for (int v = 0; v < w; ++v) {
            const int cv = colours[static_cast<std::size_t>(v)];
            if (cv == cw) {
                for (int s = 1; s <= t_of(cv); ++s)
                    if (coin.next()) edges.push_back({v, w, cv, s});
                continue;
            }
            // cv < cw here: v comes from a lower colour
            for (int s = 1; s <= t_of(cv); ++s, ++bit) {
                const bool present = prescribed ? ((rank[static_cast<std::size_t>(w)] >> bit) & 1) : coin.next();
                if (present) edges.push_back({v, w, cv, s});
            }
        }
    }
    for (int u = coloured; u < N; ++u)
        for (int c = 0; c < coloured; ++c) {
            const int cc = colours[static_cast<std::size_t>(c)];
            if (opt.restricted && cc == params.g) continue;
            for (int s = 1; s <= t_of(cc); ++s)
                if (coin.next()) edges.push_back({c, u, cc, s});
        }
    return ColourSystem(params, std::move(colours), std::move(edges));
}

RestrictedColourSystem random_restricted_system(const ColourParams& params, const FixtureOptions& opt,
                                                std::uint64_t seed)
{
    FixtureOptions o = opt;
    o.restricted = true;
    return RestrictedColourSystem(random_colour_system(params, o, seed));
}

} // namespace aclab
