#include "aclab/graph.hpp"

#include <algorithm>
#include <set>

#include "aclab/errors.hpp"

namespace aclab {

VertexSet VertexSet::full(int n)
{
    VertexSet s(n);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    if (n % 64 != 0 && !s.words_.empty()) s.words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
    return s;
}

int VertexSet::size() const noexcept
{
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
}

bool VertexSet::empty() const noexcept
{
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::vector<int> VertexSet::members() const
{
    std::vector<int> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        std::uint64_t w = words_[i];
        while (w) {
            out.push_back(static_cast<int>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
            w &= w - 1;
        }
    }
    return out;
}

VertexSet& VertexSet::operator&=(const VertexSet& o) noexcept
{
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
}

VertexSet& VertexSet::operator|=(const VertexSet& o) noexcept
{
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
}

VertexSet& VertexSet::subtract(const VertexSet& o) noexcept
{
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
}

int intersection_size(const VertexSet& a, const VertexSet& b) noexcept
{
    int c = 0;
    const auto& x = a.words();
    const auto& y = b.words();
    for (std::size_t i = 0; i < x.size(); ++i) c += std::popcount(x[i] & y[i]);
    return c;
}

Graph::Graph(int n) : n_(n)
{
    if (n < 0) throw ValidationError("graph order must be nonnegative");
    rows_.assign(static_cast<std::size_t>(n), VertexSet(n));
}

Graph::Graph(int n, const std::vector<Edge>& edges) : Graph(n)
{
    for (auto [u, v] : edges) {
        check_pair(u, v);
        if (has_edge(u, v)) throw ValidationError("duplicate edge");
        add_edge(u, v);
    }
}

void Graph::check_pair(int u, int v) const
{
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw ValidationError("edge endpoint out of range");
    if (u == v) throw ValidationError("self-loop");
}

void Graph::add_edge(int u, int v)
{
    check_pair(u, v);
    if (has_edge(u, v)) return;
    rows_[static_cast<std::size_t>(u)].insert(v);
    rows_[static_cast<std::size_t>(v)].insert(u);
    ++edges_;
}

void Graph::remove_edge(int u, int v)
{
    check_pair(u, v);
    if (!has_edge(u, v)) return;
    rows_[static_cast<std::size_t>(u)].erase(v);
    rows_[static_cast<std::size_t>(v)].erase(u);
    --edges_;
}

void Graph::set_edge(int u, int v, bool present)
{
    if (present) add_edge(u, v);
    else remove_edge(u, v);
}

bool Graph::toggle_edge(int u, int v)
{
    const bool now = !has_edge(u, v);
    set_edge(u, v, now);
    return now;
}

std::vector<Edge> Graph::edges() const
{
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(edges_));
    for (int u = 0; u < n_; ++u)
        for (int v : rows_[static_cast<std::size_t>(u)].members())
            if (v > u) out.emplace_back(u, v);
    return out;
}

Graph Graph::induced(const std::vector<int>& vertices) const
{
    Graph out(static_cast<int>(vertices.size()));
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            if (has_edge(vertices[i], vertices[j])) out.add_edge(static_cast<int>(i), static_cast<int>(j));
    return out;
}

PatternGraph::PatternGraph(int h, std::vector<Edge> edges, std::string name)
    : h_(h), name_(std::move(name)), adj_(static_cast<std::size_t>(std::max(h, 0)), 0)
{
    if (h < 1) throw ValidationError("pattern graph needs at least one vertex");
    if (h > 16) throw CapacityError("pattern graphs are limited to 16 vertices");
    std::set<Edge> seen;
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= h || v >= h) throw ValidationError("pattern edge endpoint out of range");
        if (u == v) throw ValidationError("pattern graph has a self-loop");
        Edge e{std::min(u, v), std::max(u, v)};
        if (!seen.insert(e).second) throw ValidationError("pattern graph has a duplicate edge");
        adj_[static_cast<std::size_t>(u)] |= 1u << v;
        adj_[static_cast<std::size_t>(v)] |= 1u << u;
    }
    edges_.assign(seen.begin(), seen.end());

    std::uint32_t reached = 1, frontier = 1;
    while (frontier) {
        std::uint32_t next = 0;
        for (int x = 0; x < h_; ++x)
            if ((frontier >> x) & 1u) next |= adj_[static_cast<std::size_t>(x)];
        frontier = next & ~reached;
        reached |= next;
    }
    connected_ = std::popcount(reached) == h_;
}

int PatternGraph::edges_within(std::uint32_t mask) const noexcept
{
    int c = 0;
    for (auto [u, v] : edges_)
        if (((mask >> u) & 1u) && ((mask >> v) & 1u)) ++c;
    return c;
}

PatternGraph PatternGraph::named(const std::string& name)
{
    if (name == "K2+K1") return PatternGraph(3, {{0, 1}}, name);
    if (name.size() < 2) throw ValidationError("unknown pattern graph: " + name);
    const char kind = name[0];
    int k = 0;
    try {
        std::size_t used = 0;
        k = std::stoi(name.substr(1), &used);
        if (used != name.size() - 1) throw ValidationError("unknown pattern graph: " + name);
    } catch (const std::logic_error&) {
        throw ValidationError("unknown pattern graph: " + name);
    }
    std::vector<Edge> edges;
    if (kind == 'K' && k >= 1 && k <= 6) {
        for (int u = 0; u < k; ++u)
            for (int v = u + 1; v < k; ++v) edges.emplace_back(u, v);
    } else if (kind == 'P' && k >= 1 && k <= 6) {
        for (int u = 0; u + 1 < k; ++u) edges.emplace_back(u, u + 1);
    } else if (kind == 'C' && k >= 3 && k <= 6) {
        for (int u = 0; u < k; ++u) edges.emplace_back(std::min(u, (u + 1) % k), std::max(u, (u + 1) % k));
    } else {
        throw ValidationError("unknown pattern graph: " + name);
    }
    return PatternGraph(k, edges, name);
}

nlohmann::json to_json(const Graph& g)
{
    nlohmann::json edges = nlohmann::json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    return {{"n", g.n()}, {"edges", edges}};
}

namespace {

std::vector<Edge> edges_from_json(const nlohmann::json& j)
{
    std::vector<Edge> out;
    if (!j.contains("edges")) return out;
    if (!j.at("edges").is_array()) throw ValidationError("\"edges\" must be an array");
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw ValidationError("each edge must be a pair [u, v]");
        out.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return out;
}

} // namespace

Graph graph_from_json(const nlohmann::json& j)
{
    try {
        return Graph(j.at("n").get<int>(), edges_from_json(j));
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError(std::string("malformed graph JSON: ") + ex.what());
    }
}

nlohmann::json to_json(const PatternGraph& h)
{
    nlohmann::json edges = nlohmann::json::array();
    for (auto [u, v] : h.edges()) edges.push_back({u, v});
    return {{"name", h.name()}, {"n", h.h()}, {"edges", edges}};
}

PatternGraph pattern_from_json(const nlohmann::json& j)
{
    try {
        if (j.is_string()) return PatternGraph::named(j.get<std::string>());
        if (!j.contains("n")) return PatternGraph::named(j.at("name").get<std::string>());
        return PatternGraph(j.at("n").get<int>(), edges_from_json(j), j.value("name", std::string{}));
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError(std::string("malformed pattern graph JSON: ") + ex.what());
    }
}

} // namespace aclab
