#pragma once

#include <climits>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "aclab/graph.hpp"
#include "aclab/table.hpp"

namespace aclab {

// Ordered above every colour, so the colour of an edge is min(colour(u), colour(v)).
inline constexpr int kUncoloured = INT_MAX;

struct ColourParams {
    int g = 0;
    std::vector<int> a;
    std::vector<int> t;

    // t_1 ... t_g
    std::uint64_t T() const;
    // a_1 t_1 + ... + a_k t_k
    int pattern_bits(int k) const;
    std::vector<int> shape() const { return t; }
    void check() const;

    friend bool operator==(const ColourParams&, const ColourParams&) = default;
};

struct ColourEdge {
    int u = 0;
    int v = 0;
    int colour = 0;
    int shade = 0;

    friend bool operator==(const ColourEdge&, const ColourEdge&) = default;
};

struct Violation {
    std::string rule;
    std::string detail;
};

// Vertices are 0..N-1; colour[v] is in 1..g or kUncoloured. The constructor
// only checks shape (ids, endpoints in range); the colour-system rules are
// checked by validate().
class ColourSystem {
public:
    ColourSystem() = default;
    ColourSystem(ColourParams params, std::vector<int> colours, std::vector<ColourEdge> edges);

    const ColourParams& params() const noexcept { return params_; }
    int g() const noexcept { return params_.g; }
    int order() const noexcept { return static_cast<int>(colour_.size()); }
    int colour(int v) const noexcept { return colour_[static_cast<std::size_t>(v)]; }
    bool is_coloured(int v) const noexcept { return colour(v) != kUncoloured; }
    const std::vector<int>& colours() const noexcept { return colour_; }
    const std::vector<ColourEdge>& edges() const noexcept { return edges_; }

    // Uncoloured vertices in id order; position k is vertex k of any G0.
    const std::vector<int>& uncoloured() const noexcept { return uncoloured_; }
    // -1 for coloured vertices.
    int uncoloured_index(int v) const noexcept { return u_index_[static_cast<std::size_t>(v)]; }
    // Vertices of colour i (1-based), id order.
    const std::vector<int>& colour_class(int i) const { return classes_.at(static_cast<std::size_t>(i - 1)); }
    // Coloured vertices ordered by (colour, id).
    std::vector<int> coloured_vertices() const;

    bool has_edge(int u, int v, int colour, int shade) const;
    // Bitmask of shades s with an edge (u, v, colour, s); shades up to 63.
    std::uint64_t shades_between(int u, int v, int colour) const;

    friend bool operator==(const ColourSystem& a, const ColourSystem& b)
    {
        return a.params_ == b.params_ && a.colour_ == b.colour_ && a.edges_ == b.edges_;
    }

private:
    ColourParams params_;
    std::vector<int> colour_;
    std::vector<ColourEdge> edges_;
    std::vector<int> uncoloured_;
    std::vector<int> u_index_;
    std::vector<std::vector<int>> classes_;
    std::unordered_map<std::uint64_t, std::uint64_t> shade_index_;
};

std::vector<Violation> validate(const ColourSystem& cs);
// Throws ValidationError listing the first violation.
void require_valid(const ColourSystem& cs);

// The simple graph with G0 on U plus the colour-i edges of shade j_i.
Graph realize(const ColourSystem& cs, const Graph& G0, const ShadeTuple& shades);

// Copy of cs with the given edges appended.
ColourSystem with_edges(const ColourSystem& cs, const std::vector<ColourEdge>& extra);

// Keeps the listed vertices (renumbered in list order) and the edges among them.
ColourSystem induced_system(const ColourSystem& cs, const std::vector<int>& keep, const ColourParams& params);

nlohmann::json to_json(const ColourSystem& cs);
ColourSystem colour_system_from_json(const nlohmann::json& j);

nlohmann::json to_json(const IntTable& t);
nlohmann::json to_json(const RationalTable& t);
nlohmann::json to_json(const Rational& q);
RationalTable rational_table_from_json(const nlohmann::json& j);
IntTable int_table_from_json(const nlohmann::json& j);

} // namespace aclab
