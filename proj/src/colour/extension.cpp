#include "aclab/extension.hpp"

#include <algorithm>
#include <map>

#include "aclab/errors.hpp"
#include "aclab/parallel.hpp"
#include "aclab/psi.hpp"
#include "aclab/rng.hpp"

namespace aclab {

RestrictedColourSystem::RestrictedColourSystem(ColourSystem cs) : cs_(std::move(cs))
{
    const int g = cs_.g();
    if (g < 1) throw ValidationError("a restricted colour system needs g >= 1");
    if (cs_.params().t.back() != 1) throw ValidationError("a restricted colour system needs t_g = 1");
    for (const auto& e : cs_.edges())
        if (e.colour == g && (!cs_.is_coloured(e.u) || !cs_.is_coloured(e.v)))
            throw ValidationError("restricted colour system has a colour-g edge to an uncoloured vertex");
}

Extension sample_extension(const RestrictedColourSystem& rcs, const RationalProb& p, std::uint64_t seed)
{
    Engine engine(seed);
    BernoulliStream coin(engine, p);
    Extension ext;
    ext.vertices = rcs.top_vertices();
    for (std::size_t k = 0; k < ext.vertices.size(); ++k) {
        std::vector<int> s;
        for (int u : rcs.system().uncoloured())
            if (coin.next()) s.push_back(u);
        ext.sets.push_back(std::move(s));
    }
    return ext;
}

ColourSystem apply_extension(const RestrictedColourSystem& rcs, const Extension& ext)
{
    const auto& cs = rcs.system();
    if (ext.vertices != rcs.top_vertices() || ext.sets.size() != ext.vertices.size())
        throw ValidationError("extension domain must be exactly the colour-g vertices");
    std::vector<ColourEdge> extra;
    for (std::size_t k = 0; k < ext.vertices.size(); ++k)
        for (int u : ext.sets[k]) {
            if (u < 0 || u >= cs.order() || cs.is_coloured(u))
                throw ValidationError("extension set contains a vertex outside U");
            extra.push_back({ext.vertices[k], u, cs.g(), 1});
        }
    return with_edges(cs, extra);
}

ExtendedSystem extend_restricted(const RestrictedColourSystem& rcs, const RationalProb& p, std::uint64_t seed)
{
    Extension ext = sample_extension(rcs, p, seed);
    ColourSystem sys = apply_extension(rcs, ext);
    return {std::move(ext), std::move(sys)};
}

SetFamily essential_family(const RestrictedColourSystem& rcs) { return neighbourhood_family(rcs.system(), rcs.g() - 1); }

Generality essential_generality(const RestrictedColourSystem& rcs, const RationalProb& p)
{
    return classify_family(essential_family(rcs), p, rcs.g() - 1);
}

ColourSystem ignore_top_colour(const RestrictedColourSystem& rcs)
{
    const auto& cs = rcs.system();
    std::vector<int> keep;
    for (int v = 0; v < cs.order(); ++v)
        if (cs.colour(v) != cs.g()) keep.push_back(v);
    ColourParams P = cs.params();
    P.g -= 1;
    P.a.pop_back();
    P.t.pop_back();
    return induced_system(cs, keep, P);
}

DispersednessReport dispersedness_estimate(const RestrictedColourSystem& rcs, const Graph& G0, const PatternGraph& H,
                                           const RationalProb& p, double q, std::uint64_t trials, std::uint64_t seed,
                                           unsigned workers)
{
    if (!(q > 0.0 && q <= 1.0)) throw ValidationError("dispersedness threshold q must lie in (0, 1]");
    if (trials < 1) throw ValidationError("dispersedness estimate needs trials >= 1");
    DispersednessReport rep;
    rep.q = q;
    if (essential_generality(rcs, p) != Generality::PGeneral) rep.warnings.push_back("not essentially p-general");
    try {
        if (!is_complete(rcs.system())) rep.warnings.push_back("not complete");
    } catch (const CapacityError& ex) {
        rep.warnings.push_back(std::string("completeness not checked: ") + ex.what());
    }

    std::vector<IntTable> tables(trials);
    for_each_trial(trials, resolve_workers(workers), [&](std::uint64_t t) {
        const ColourSystem sys = apply_extension(rcs, sample_extension(rcs, p, derive_seed(seed, "extension", t)));
        tables[t] = psi_table(H, sys, G0);
    });
    std::map<std::vector<std::int64_t>, std::uint64_t> freq;
    for (const auto& tb : tables) ++freq[tb.entries()];
    std::uint64_t best = 0;
    const std::vector<std::int64_t>* arg = nullptr;
    for (const auto& [entries, c] : freq)
        if (c > best) {
            best = c;
            arg = &entries;
        }
    rep.distinct_tables = freq.size();
    rep.attaining = IntTable(rcs.system().params().shape(), *arg);
    rep.max_frequency = make_estimate(best, trials, seed);
    rep.dispersed = rep.max_frequency.estimate + rep.max_frequency.interval.half_width() <= q;
    return rep;
}

nlohmann::json to_json(const Extension& ext)
{
    nlohmann::json sets = nlohmann::json::array();
    for (std::size_t k = 0; k < ext.vertices.size(); ++k) sets.push_back({{"v", ext.vertices[k]}, {"S", ext.sets[k]}});
    return sets;
}

Extension extension_from_json(const nlohmann::json& j)
{
    try {
        Extension ext;
        for (const auto& item : j) {
            ext.vertices.push_back(item.at("v").get<int>());
            auto s = item.at("S").get<std::vector<int>>();
            std::sort(s.begin(), s.end());
            ext.sets.push_back(std::move(s));
        }
        return ext;
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError(std::string("malformed extension JSON: ") + ex.what());
    }
}

} // namespace aclab
