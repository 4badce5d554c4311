#include "aclab/colour_system.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "aclab/errors.hpp"

namespace aclab {

std::uint64_t ColourParams::T() const
{
    std::uint64_t prod = 1;
    for (int x : t) prod *= static_cast<std::uint64_t>(x);
    return prod;
}

int ColourParams::pattern_bits(int k) const
{
    int bits = 0;
    for (int i = 0; i < k && i < g; ++i) bits += a[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(i)];
    return bits;
}

void ColourParams::check() const
{
    if (g < 0) throw ValidationError("g must be nonnegative");
    if (static_cast<int>(a.size()) != g || static_cast<int>(t.size()) != g)
        throw ValidationError("a and t must both have length g");
    for (int x : a)
        if (x < 1) throw ValidationError("every a_i must be positive");
    for (int x : t) {
        if (x < 1) throw ValidationError("every t_i must be positive");
        if (x > 63) throw CapacityError("shade counts are limited to 63");
    }
}

namespace {

std::uint64_t pair_key(int u, int v, int colour)
{
    if (u > v) std::swap(u, v);
    // 22 bits per vertex, 20 bits of colour
    return (static_cast<std::uint64_t>(u) << 42) | (static_cast<std::uint64_t>(v) << 20) |
           (static_cast<std::uint64_t>(colour) & 0xFFFFF);
}

} // namespace

ColourSystem::ColourSystem(ColourParams params, std::vector<int> colours, std::vector<ColourEdge> edges)
    : params_(std::move(params)), colour_(std::move(colours)), edges_(std::move(edges))
{
    params_.check();
    const int N = order();
    u_index_.assign(static_cast<std::size_t>(N), -1);
    classes_.assign(static_cast<std::size_t>(params_.g), {});
    for (int v = 0; v < N; ++v) {
        const int c = colour_[static_cast<std::size_t>(v)];
        if (c == kUncoloured) {
            u_index_[static_cast<std::size_t>(v)] = static_cast<int>(uncoloured_.size());
            uncoloured_.push_back(v);
        } else if (c >= 1 && c <= params_.g) {
            classes_[static_cast<std::size_t>(c - 1)].push_back(v);
        } else if (c < 1) {
            throw ValidationError("vertex " + std::to_string(v) + " has invalid colour " + std::to_string(c));
        }
        // colours above g are kept and reported by validate()
    }
    for (const auto& e : edges_)
        if (e.u < 0 || e.v < 0 || e.u >= N || e.v >= N)
            throw ValidationError("edge endpoint out of range: (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
    for (const auto& e : edges_)
        if (e.shade >= 1 && e.shade <= 63) shade_index_[pair_key(e.u, e.v, e.colour)] |= std::uint64_t{1} << (e.shade - 1);
}

std::vector<int> ColourSystem::coloured_vertices() const
{
    std::vector<int> out;
    for (const auto& cls : classes_) out.insert(out.end(), cls.begin(), cls.end());
    return out;
}

bool ColourSystem::has_edge(int u, int v, int colour, int shade) const
{
    if (shade < 1 || shade > 63) return false;
    return (shades_between(u, v, colour) >> (shade - 1)) & 1u;
}

std::uint64_t ColourSystem::shades_between(int u, int v, int colour) const
{
    auto it = shade_index_.find(pair_key(u, v, colour));
    return it == shade_index_.end() ? 0 : it->second;
}

std::vector<Violation> validate(const ColourSystem& cs)
{
    std::vector<Violation> out;
    const auto& P = cs.params();
    std::vector<int> counts(static_cast<std::size_t>(P.g), 0);
    for (int v = 0; v < cs.order(); ++v) {
        const int c = cs.colour(v);
        if (c == kUncoloured) continue;
        if (c > P.g) {
            out.push_back({"vertex-colour", "vertex " + std::to_string(v) + " has colour " + std::to_string(c) +
                                                " but g = " + std::to_string(P.g)});
            continue;
        }
        ++counts[static_cast<std::size_t>(c - 1)];
    }
    for (int i = 1; i <= P.g; ++i)
        if (counts[static_cast<std::size_t>(i - 1)] != P.a[static_cast<std::size_t>(i - 1)])
            out.push_back({"colour-count", "colour " + std::to_string(i) + " has " +
                                               std::to_string(counts[static_cast<std::size_t>(i - 1)]) +
                                               " vertices, expected " + std::to_string(P.a[static_cast<std::size_t>(i - 1)])});

    std::set<std::tuple<int, int, int, int>> seen;
    for (std::size_t k = 0; k < cs.edges().size(); ++k) {
        const auto& e = cs.edges()[k];
        const std::string where = "edge #" + std::to_string(k) + " (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ", colour " + std::to_string(e.colour) + ", shade " +
                                  std::to_string(e.shade) + ")";
        if (e.u == e.v) {
            out.push_back({"loop", where + ": self-loop"});
            continue;
        }
        const int cu = cs.colour(e.u), cv = cs.colour(e.v);
        if (cu == kUncoloured && cv == kUncoloured) {
            out.push_back({"uncoloured-edge", where + ": edge incident to no coloured vertex"});
            continue;
        }
        const int expected = std::min(cu, cv);
        if (e.colour != expected) {
            out.push_back({"edge-colour", where + ": colour should be " + std::to_string(expected)});
            continue;
        }
        if (expected > P.g) continue; // already reported as vertex-colour
        if (e.shade < 1 || e.shade > P.t[static_cast<std::size_t>(e.colour - 1)]) {
            out.push_back({"shade-range", where + ": shade outside 1.." +
                                              std::to_string(P.t[static_cast<std::size_t>(e.colour - 1)])});
            continue;
        }
        if (!seen.insert({std::min(e.u, e.v), std::max(e.u, e.v), e.colour, e.shade}).second)
            out.push_back({"duplicate-edge", where + ": repeats a (pair, colour, shade)"});
    }
    return out;
}

void require_valid(const ColourSystem& cs)
{
    auto v = validate(cs);
    if (!v.empty()) throw ValidationError("invalid colour system: " + v.front().detail);
}

Graph realize(const ColourSystem& cs, const Graph& G0, const ShadeTuple& shades)
{
    const auto& U = cs.uncoloured();
    if (G0.n() != static_cast<int>(U.size()))
        throw ValidationError("G0 has " + std::to_string(G0.n()) + " vertices but the colour system has " +
                              std::to_string(U.size()) + " uncoloured vertices");
    if (static_cast<int>(shades.size()) != cs.g()) throw ValidationError("shade tuple has wrong length");
    for (int i = 0; i < cs.g(); ++i)
        if (shades[static_cast<std::size_t>(i)] < 1 || shades[static_cast<std::size_t>(i)] > cs.params().t[static_cast<std::size_t>(i)])
            throw ValidationError("shade out of range");
    Graph out(cs.order());
    for (auto [a, b] : G0.edges()) out.add_edge(U[static_cast<std::size_t>(a)], U[static_cast<std::size_t>(b)]);
    for (const auto& e : cs.edges())
        if (e.colour >= 1 && e.colour <= cs.g() && e.shade == shades[static_cast<std::size_t>(e.colour - 1)])
            out.add_edge(e.u, e.v);
    return out;
}

ColourSystem with_edges(const ColourSystem& cs, const std::vector<ColourEdge>& extra)
{
    auto edges = cs.edges();
    edges.insert(edges.end(), extra.begin(), extra.end());
    return ColourSystem(cs.params(), cs.colours(), std::move(edges));
}

ColourSystem induced_system(const ColourSystem& cs, const std::vector<int>& keep, const ColourParams& params)
{
    std::vector<int> pos(static_cast<std::size_t>(cs.order()), -1);
    std::vector<int> colours;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        pos[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
        colours.push_back(cs.colour(keep[i]));
    }
    std::vector<ColourEdge> edges;
    for (const auto& e : cs.edges()) {
        const int a = pos[static_cast<std::size_t>(e.u)], b = pos[static_cast<std::size_t>(e.v)];
        if (a >= 0 && b >= 0) edges.push_back({a, b, e.colour, e.shade});
    }
    return ColourSystem(params, std::move(colours), std::move(edges));
}

nlohmann::json to_json(const ColourSystem& cs)
{
    nlohmann::json vertices = nlohmann::json::array();
    for (int v = 0; v < cs.order(); ++v) {
        nlohmann::json c = cs.colour(v) == kUncoloured ? nlohmann::json(nullptr) : nlohmann::json(cs.colour(v));
        vertices.push_back({{"id", v}, {"colour", c}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : cs.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"colour", e.colour}, {"shade", e.shade}});
    return {{"g", cs.g()}, {"a", cs.params().a}, {"t", cs.params().t}, {"vertices", vertices}, {"edges", edges}};
}

ColourSystem colour_system_from_json(const nlohmann::json& j)
{
    try {
        ColourParams P{j.at("g").get<int>(), j.at("a").get<std::vector<int>>(), j.at("t").get<std::vector<int>>()};
        const auto& vs = j.at("vertices");
        std::vector<int> colours(vs.size(), 0);
        std::vector<bool> seen(vs.size(), false);
        for (const auto& v : vs) {
            const int id = v.at("id").get<int>();
            if (id < 0 || id >= static_cast<int>(vs.size()) || seen[static_cast<std::size_t>(id)])
                throw ValidationError("vertex ids must be exactly 0..N-1");
            seen[static_cast<std::size_t>(id)] = true;
            const auto& c = v.at("colour");
            colours[static_cast<std::size_t>(id)] = c.is_null() ? kUncoloured : c.get<int>();
        }
        std::vector<ColourEdge> edges;
        for (const auto& e : j.at("edges"))
            edges.push_back({e.at("u").get<int>(), e.at("v").get<int>(), e.at("colour").get<int>(), e.at("shade").get<int>()});
        return ColourSystem(std::move(P), std::move(colours), std::move(edges));
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError(std::string("malformed colour system JSON: ") + ex.what());
    }
}

nlohmann::json to_json(const Rational& q)
{
    return {{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

nlohmann::json to_json(const IntTable& t)
{
    return {{"shape", t.shape()}, {"entries", t.entries()}};
}

nlohmann::json to_json(const RationalTable& t)
{
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& q : t.entries()) entries.push_back(to_json(q));
    return {{"shape", t.shape()}, {"entries", entries}};
}

RationalTable rational_table_from_json(const nlohmann::json& j)
{
    try {
        std::vector<Rational> entries;
        for (const auto& e : j.at("entries")) {
            Rational q(BigInt(e.at("num").get<std::string>()), BigInt(e.at("den").get<std::string>()));
            q.canonicalize();
            entries.push_back(q);
        }
        return RationalTable(j.at("shape").get<std::vector<int>>(), std::move(entries));
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError(std::string("malformed table JSON: ") + ex.what());
    }
}

IntTable int_table_from_json(const nlohmann::json& j)
{
    try {
        return IntTable(j.at("shape").get<std::vector<int>>(), j.at("entries").get<std::vector<std::int64_t>>());
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError(std::string("malformed table JSON: ") + ex.what());
    }
}

} // namespace aclab
