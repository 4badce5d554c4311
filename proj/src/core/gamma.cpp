#include "aclab/gamma.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

#include "aclab/errors.hpp"

namespace aclab {

namespace {

std::uint64_t all_shades(int t) { return t >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << t) - 1; }

// Colour of a core vertex as a slot: hub is slot 0, colour i is slot i.
int slot_of(const Core& core, int v) { return v == core.hub() ? 0 : core.system().colour(v); }

struct RequiredEdge {
    int a = 0, b = 0;   // slots
    int colour = 0;
    int shade = 0;
};

} // namespace

RationalTable gamma(const Core& core, const PatternGraph& H, const std::vector<int>& required, const RationalProb& p)
{
    const auto& cs = core.system();
    const int g = core.g();
    RationalTable out(core.shape(), Rational(0));
    const int h = H.h();
    for (int k : required)
        if (k < 0 || k >= static_cast<int>(core.edges().size())) throw ValidationError("required edge index out of range");
    if (h < g + 1) return out;

    // Pin slots to the endpoints of the required edges.
    std::vector<int> pinned(static_cast<std::size_t>(g + 1), -1);
    pinned[0] = core.hub();
    std::vector<RequiredEdge> req;
    for (int k : required) {
        const auto& e = core.edge(k);
        for (int v : {e.u, e.v}) {
            int& pin = pinned[static_cast<std::size_t>(slot_of(core, v))];
            if (pin >= 0 && pin != v) return out;   // two vertices of one colour
            pin = v;
        }
        req.push_back({slot_of(core, e.u), slot_of(core, e.v), e.colour, e.shade});
    }

    const std::vector<int> shape = core.shape();
    const std::size_t vol = out.size();
    std::vector<ShadeTuple> tuples(vol);
    for (std::size_t f = 0; f < vol; ++f) tuples[f] = out.tuple_at(f);

    // tally[exponent][flat] counts partial copies of that weight.
    std::vector<std::vector<std::int64_t>> tally(static_cast<std::size_t>(H.e() + 1), std::vector<std::int64_t>(vol, 0));

    std::vector<int> chosen(static_cast<std::size_t>(g + 1));
    chosen[0] = core.hub();
    std::vector<std::uint64_t> pair_shades(static_cast<std::size_t>((g + 1) * (g + 1)), 0);
    std::vector<int> image(static_cast<std::size_t>(g + 1));   // slot -> H vertex
    std::vector<std::uint64_t> allowed(static_cast<std::size_t>(g + 1));

    auto pair_colour = [](int a, int b) { return std::min(a == 0 ? kUncoloured : a, b == 0 ? kUncoloured : b); };

    auto score = [&]() {
        for (int c = 1; c <= g; ++c) allowed[static_cast<std::size_t>(c)] = all_shades(shape[static_cast<std::size_t>(c - 1)]);
        std::uint32_t mask = 0;
        for (int s = 0; s <= g; ++s) mask |= 1u << image[static_cast<std::size_t>(s)];
        for (int a = 0; a <= g; ++a)
            for (int b = a + 1; b <= g; ++b) {
                if (!H.adjacent(image[static_cast<std::size_t>(a)], image[static_cast<std::size_t>(b)])) continue;
                const int c = pair_colour(a, b);
                auto& al = allowed[static_cast<std::size_t>(c)];
                al &= pair_shades[static_cast<std::size_t>(a * (g + 1) + b)];
                if (!al) return;
            }
        for (const auto& r : req) {
            if (!H.adjacent(image[static_cast<std::size_t>(r.a)], image[static_cast<std::size_t>(r.b)])) return;
            auto& al = allowed[static_cast<std::size_t>(r.colour)];
            al &= std::uint64_t{1} << (r.shade - 1);
            if (!al) return;
        }
        auto& row = tally[static_cast<std::size_t>(H.e() - H.edges_within(mask))];
        for (std::size_t f = 0; f < vol; ++f) {
            const auto& tp = tuples[f];
            bool ok = true;
            for (int c = 1; c <= g && ok; ++c)
                ok = (allowed[static_cast<std::size_t>(c)] >> (tp[static_cast<std::size_t>(c - 1)] - 1)) & 1u;
            if (ok) ++row[f];
        }
    };

    // Injective assignment of H vertices to slots.
    std::uint32_t used = 0;
    auto assign = [&](auto&& self, int s) -> void {
        if (s > g) {
            score();
            return;
        }
        for (int x = 0; x < h; ++x) {
            if ((used >> x) & 1u) continue;
            used |= 1u << x;
            image[static_cast<std::size_t>(s)] = x;
            self(self, s + 1);
            used &= ~(1u << x);
        }
    };

    auto choose = [&](auto&& self, int c) -> void {
        if (c > g) {
            for (int a = 0; a <= g; ++a)
                for (int b = a + 1; b <= g; ++b) {
                    const int col = pair_colour(a, b);
                    pair_shades[static_cast<std::size_t>(a * (g + 1) + b)] =
                        cs.shades_between(chosen[static_cast<std::size_t>(a)], chosen[static_cast<std::size_t>(b)], col);
                }
            assign(assign, 0);
            return;
        }
        const int pin = pinned[static_cast<std::size_t>(c)];
        if (pin >= 0) {
            chosen[static_cast<std::size_t>(c)] = pin;
            self(self, c + 1);
            return;
        }
        for (int v : cs.colour_class(c)) {
            chosen[static_cast<std::size_t>(c)] = v;
            self(self, c + 1);
        }
    };
    choose(choose, 1);

    const Rational pv = p.value();
    for (std::size_t ex = 0; ex < tally.size(); ++ex) {
        const Rational w = rational_pow(pv, static_cast<unsigned>(ex));
        for (std::size_t f = 0; f < vol; ++f)
            if (tally[ex][f]) out[f] += w * Rational(static_cast<long>(tally[ex][f]));
    }
    return out;
}

std::vector<std::string> downward_tree_problems(const Core& core, const std::vector<int>& edges)
{
    std::vector<std::string> bad;
    const int g = core.g();
    const int b = static_cast<int>(edges.size());
    if (b < 1 || b > g) {
        bad.push_back("size must lie in 1..g");
        return bad;
    }
    std::vector<int> seen_colour(static_cast<std::size_t>(g + 1), 0);
    std::map<int, int> degree;
    for (int k : edges) {
        if (k < 0 || k >= static_cast<int>(core.edges().size())) {
            bad.push_back("edge index out of range");
            return bad;
        }
        const auto& e = core.edge(k);
        if (e.colour < g - b + 1 || e.colour > g) bad.push_back("edge colour outside g-b+1..g");
        else if (seen_colour[static_cast<std::size_t>(e.colour)]++) bad.push_back("two edges of colour " + std::to_string(e.colour));
        ++degree[e.u];
        ++degree[e.v];
    }
    if (!bad.empty()) return bad;
    if (static_cast<int>(degree.size()) != b + 1) bad.push_back("edges do not form a tree");
    if (!degree.count(core.hub())) bad.push_back("tree misses the uncoloured vertex");
    else if (degree[core.hub()] != 1) bad.push_back("uncoloured vertex is not a leaf");
    // b edges on b + 1 vertices form a tree iff connected.
    std::map<int, int> parent;
    for (const auto& [v, d] : degree) parent[v] = v;
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    int merges = 0;
    for (int k : edges) {
        const int a = find(core.edge(k).u), c = find(core.edge(k).v);
        if (a != c) {
            parent[a] = c;
            ++merges;
        }
    }
    if (merges != b && static_cast<int>(degree.size()) == b + 1) bad.push_back("edges do not form a tree");
    std::vector<int> per_colour(static_cast<std::size_t>(g + 1), 0);
    for (const auto& [v, d] : degree)
        if (v != core.hub()) {
            const int c = core.system().colour(v);
            if (c < g - b + 1) bad.push_back("tree contains a vertex of colour " + std::to_string(c));
            else ++per_colour[static_cast<std::size_t>(c)];
        }
    for (int c = g - b + 1; c <= g; ++c)
        if (per_colour[static_cast<std::size_t>(c)] != 1) bad.push_back("colour " + std::to_string(c) + " does not appear exactly once");
    return bad;
}

DownwardTree make_downward_tree(const Core& core, std::vector<int> edges)
{
    const auto bad = downward_tree_problems(core, edges);
    if (!bad.empty()) throw ValidationError("not a downward tree: " + bad.front());
    std::sort(edges.begin(), edges.end(), [&](int x, int y) { return core.edge(x).colour > core.edge(y).colour; });
    return DownwardTree{std::move(edges)};
}

std::vector<DownwardTree> enumerate_downward_trees(const Core& core, int b)
{
    const int g = core.g();
    if (b < 1 || b > g) throw ValidationError("downward tree size must lie in 1..g");
    const auto& cs = core.system();
    std::vector<std::pair<DownwardTree, std::vector<int>>> level;   // tree, its coloured vertices
    for (int k : core.top_edges()) {
        const auto& e = core.edge(k);
        level.push_back({DownwardTree{{k}}, {e.u == core.hub() ? e.v : e.u}});
    }
    for (int size = 2; size <= b; ++size) {
        const int c = g - size + 1;
        std::vector<std::pair<DownwardTree, std::vector<int>>> next;
        for (const auto& [tree, verts] : level)
            for (int x : cs.colour_class(c))
                for (int y : verts)
                    for (int s = 1; s <= cs.params().t[static_cast<std::size_t>(c - 1)]; ++s) {
                        const int k = core.edge_index(x, y, c, s);
                        if (k < 0) continue;
                        DownwardTree grown = tree;
                        grown.edges.push_back(k);
                        std::vector<int> vs = verts;
                        vs.push_back(x);
                        next.push_back({std::move(grown), std::move(vs)});
                    }
        level = std::move(next);
    }
    std::vector<DownwardTree> out;
    out.reserve(level.size());
    for (auto& [tree, verts] : level) out.push_back(std::move(tree));
    return out;
}

int tree_leaf(const Core& core, const DownwardTree& tree)
{
    const int c = core.g() - tree.size() + 1;
    const auto& e = core.edge(tree.last_edge());
    return core.system().colour(e.u) == c ? e.u : e.v;
}

nlohmann::json to_json(const DownwardTree& tree, const Core& core)
{
    nlohmann::json edges = nlohmann::json::array();
    for (int k : tree.edges) {
        const auto& e = core.edge(k);
        edges.push_back({{"index", k}, {"u", e.u}, {"v", e.v}, {"colour", e.colour}, {"shade", e.shade}});
    }
    return {{"size", tree.size()}, {"edges", edges}};
}

} // namespace aclab
