#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace aclab {

using Edge = std::pair<int, int>;

// Bitset over vertex ids, 64 per word.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(int n) : n_(n), words_((static_cast<std::size_t>(n) + 63) / 64, 0) {}

    static VertexSet full(int n);

    int universe() const noexcept { return n_; }
    bool contains(int v) const noexcept { return (words_[static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1u; }
    void insert(int v) noexcept { words_[static_cast<std::size_t>(v) >> 6] |= std::uint64_t{1} << (v & 63); }
    void erase(int v) noexcept { words_[static_cast<std::size_t>(v) >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
    int size() const noexcept;
    bool empty() const noexcept;
    std::vector<int> members() const;

    VertexSet& operator&=(const VertexSet& o) noexcept;
    VertexSet& operator|=(const VertexSet& o) noexcept;
    VertexSet& subtract(const VertexSet& o) noexcept;

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }
    std::vector<std::uint64_t>& words() noexcept { return words_; }

    friend bool operator==(const VertexSet&, const VertexSet&) = default;

private:
    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

int intersection_size(const VertexSet& a, const VertexSet& b) noexcept;

// Simple undirected graph on {0..n-1} with one adjacency bit-row per vertex.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n);
    Graph(int n, const std::vector<Edge>& edges);

    int n() const noexcept { return n_; }
    bool has_edge(int u, int v) const noexcept { return rows_[static_cast<std::size_t>(u)].contains(v); }
    void add_edge(int u, int v);
    void remove_edge(int u, int v);
    void set_edge(int u, int v, bool present);
    // Returns the new state.
    bool toggle_edge(int u, int v);

    const VertexSet& neighbours(int v) const noexcept { return rows_[static_cast<std::size_t>(v)]; }
    int degree(int v) const noexcept { return rows_[static_cast<std::size_t>(v)].size(); }
    std::int64_t edge_count() const noexcept { return edges_; }
    // Sorted lexicographically, u < v.
    std::vector<Edge> edges() const;

    Graph induced(const std::vector<int>& vertices) const;

    friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.rows_ == b.rows_; }

private:
    void check_pair(int u, int v) const;

    int n_ = 0;
    std::int64_t edges_ = 0;
    std::vector<VertexSet> rows_;
};

// The fixed small graph being counted.
class PatternGraph {
public:
    PatternGraph() = default;
    PatternGraph(int h, std::vector<Edge> edges, std::string name = "");

    // K1..K6, P2..P6 (paths by vertex count), C3..C6, and "K2+K1".
    static PatternGraph named(const std::string& name);

    int h() const noexcept { return h_; }
    int e() const noexcept { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::string& name() const noexcept { return name_; }
    bool connected() const noexcept { return connected_; }
    bool adjacent(int x, int y) const noexcept { return (adj_[static_cast<std::size_t>(x)] >> y) & 1u; }
    std::uint32_t neighbour_mask(int x) const noexcept { return adj_[static_cast<std::size_t>(x)]; }
    int degree(int x) const noexcept { return std::popcount(adj_[static_cast<std::size_t>(x)]); }
    // Edges with both ends in the vertex mask.
    int edges_within(std::uint32_t mask) const noexcept;

    Graph as_graph() const { return Graph(h_, edges_); }

private:
    int h_ = 0;
    std::vector<Edge> edges_;
    std::string name_;
    std::vector<std::uint32_t> adj_;
    bool connected_ = false;
};

nlohmann::json to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PatternGraph& h);
// Accepts {"name": "K3"} alone, or the explicit {"n", "edges"} form.
PatternGraph pattern_from_json(const nlohmann::json& j);

} // namespace aclab
