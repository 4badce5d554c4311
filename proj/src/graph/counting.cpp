#include "aclab/counting.hpp"

#include <cmath>
#include <limits>

#include "aclab/errors.hpp"

namespace aclab {

void check_count_capacity(const PatternGraph& H, int n)
{
    // n^h < 2^63 keeps every count, and every partial sum, inside int64.
    long double bound = 1.0L;
    for (int i = 0; i < H.h(); ++i) bound *= static_cast<long double>(n);
    if (bound >= 9223372036854775808.0L)
        throw CapacityError("count capacity exceeded: n^h = " + std::to_string(n) + "^" + std::to_string(H.h()) +
                            " >= 2^63");
}

namespace {

struct Plan {
    std::vector<int> order;                  // pattern vertices in placement order
    std::vector<std::vector<int>> back;      // earlier-placed neighbours, as positions in `order`
    std::vector<int> pinned_to;              // graph vertex, or -1
};

Plan make_plan(const PatternGraph& H, const std::vector<std::pair<int, int>>& pins)
{
    const int h = H.h();
    Plan plan;
    plan.pinned_to.assign(static_cast<std::size_t>(h), -1);
    std::vector<bool> placed(static_cast<std::size_t>(h), false);
    for (auto [x, v] : pins) {
        if (x < 0 || x >= h) throw ValidationError("pin refers to a missing pattern vertex");
        if (placed[static_cast<std::size_t>(x)]) throw ValidationError("pattern vertex pinned twice");
        placed[static_cast<std::size_t>(x)] = true;
        plan.pinned_to[static_cast<std::size_t>(x)] = v;
        plan.order.push_back(x);
    }
    // Greedy: most already-placed neighbours, then higher degree, then lower index.
    while (static_cast<int>(plan.order.size()) < h) {
        int best = -1, best_links = -1, best_deg = -1;
        for (int x = 0; x < h; ++x) {
            if (placed[static_cast<std::size_t>(x)]) continue;
            int links = 0;
            for (int y : plan.order)
                if (H.adjacent(x, y)) ++links;
            const int deg = H.degree(x);
            if (links > best_links || (links == best_links && deg > best_deg)) {
                best = x;
                best_links = links;
                best_deg = deg;
            }
        }
        placed[static_cast<std::size_t>(best)] = true;
        plan.order.push_back(best);
    }
    plan.back.resize(static_cast<std::size_t>(h));
    for (int i = 0; i < h; ++i)
        for (int k = 0; k < i; ++k)
            if (H.adjacent(plan.order[static_cast<std::size_t>(i)], plan.order[static_cast<std::size_t>(k)]))
                plan.back[static_cast<std::size_t>(i)].push_back(k);
    return plan;
}

class Counter {
public:
    Counter(const Graph& G, const Plan& plan, const MapQuery& q)
        : G_(G), plan_(plan), q_(q), image_(plan.order.size(), -1), used_(G.n()),
          scratch_(plan.order.size(), VertexSet(G.n()))
    {
    }

    std::int64_t run() { return place(0); }

private:
    std::int64_t place(std::size_t depth)
    {
        if (depth == plan_.order.size()) return 1;
        const int x = plan_.order[depth];
        const auto& back = plan_.back[depth];
        const int pin = plan_.pinned_to[static_cast<std::size_t>(x)];

        if (pin >= 0) {
            if (q_.allowed && !q_.allowed->contains(pin)) return 0;
            if (q_.injective && used_.contains(pin)) return 0;
            for (int k : back)
                if (!G_.has_edge(image_[static_cast<std::size_t>(k)], pin)) return 0;
            return descend(depth, pin);
        }

        VertexSet& cand = scratch_[depth];
        if (back.empty()) {
            cand = q_.allowed ? *q_.allowed : VertexSet::full(G_.n());
        } else {
            cand = G_.neighbours(image_[static_cast<std::size_t>(back[0])]);
            for (std::size_t i = 1; i < back.size(); ++i) cand &= G_.neighbours(image_[static_cast<std::size_t>(back[i])]);
            if (q_.allowed) cand &= *q_.allowed;
        }
        if (q_.injective) cand.subtract(used_);
        if (depth + 1 == plan_.order.size()) return cand.size();

        std::int64_t total = 0;
        for (int v : cand.members()) total += descend(depth, v);
        return total;
    }

    std::int64_t descend(std::size_t depth, int v)
    {
        image_[depth] = v;
        const bool fresh = !used_.contains(v);
        if (fresh) used_.insert(v);
        const std::int64_t r = place(depth + 1);
        if (fresh) used_.erase(v);
        image_[depth] = -1;
        return r;
    }

    const Graph& G_;
    const Plan& plan_;
    const MapQuery& q_;
    std::vector<int> image_;
    VertexSet used_;
    std::vector<VertexSet> scratch_;
};

} // namespace

std::int64_t count_maps(const PatternGraph& H, const Graph& G, const MapQuery& query)
{
    check_count_capacity(H, G.n());
    for (auto [x, v] : query.pins)
        if (v < 0 || v >= G.n()) throw ValidationError("pin refers to a missing graph vertex");
    if (query.allowed && query.allowed->universe() != G.n())
        throw ValidationError("allowed-vertex set has the wrong universe");
    const Plan plan = make_plan(H, query.pins);
    Counter counter(G, plan, query);
    return counter.run();
}

std::int64_t count_labelled_copies(const PatternGraph& H, const Graph& G) { return count_maps(H, G, MapQuery{}); }

std::int64_t count_homomorphisms(const PatternGraph& H, const Graph& G)
{
    MapQuery q;
    q.injective = false;
    return count_maps(H, G, q);
}

std::int64_t automorphism_count(const PatternGraph& H)
{
    if (H.h() > 10) throw CapacityError("automorphism_count is limited to h <= 10");
    return count_labelled_copies(H, H.as_graph());
}

std::int64_t copies_through_edge(const PatternGraph& H, const Graph& G, int u, int v,
                                 const std::optional<VertexSet>& allowed)
{
    if (u == v) throw ValidationError("delta_edge needs two distinct vertices");
    if (u < 0 || v < 0 || u >= G.n() || v >= G.n()) throw ValidationError("vertex out of range");
    check_count_capacity(H, G.n());
    Graph plus = G;
    plus.add_edge(u, v);
    // An injective copy uses uv through exactly one ordered pattern edge.
    std::int64_t total = 0;
    for (auto [x, y] : H.edges()) {
        for (int flip = 0; flip < 2; ++flip) {
            MapQuery q;
            q.allowed = allowed;
            q.pins = flip == 0 ? std::vector<std::pair<int, int>>{{x, u}, {y, v}}
                               : std::vector<std::pair<int, int>>{{x, v}, {y, u}};
            total += count_maps(H, plus, q);
        }
    }
    return total;
}

std::int64_t delta_edge(const PatternGraph& H, const Graph& G, int u, int v)
{
    return copies_through_edge(H, G, u, v, std::nullopt);
}

} // namespace aclab
