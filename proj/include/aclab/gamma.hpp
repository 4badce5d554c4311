#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "aclab/core.hpp"
#include "aclab/graph.hpp"
#include "aclab/rational.hpp"
#include "aclab/table.hpp"

namespace aclab {

// Table over (t_1, ..., t_{g-1}, 1): entry j is the total weight
// p^(e(H) - e_H(V')) of the j-coloured partial copies of H in the core whose
// image contains every edge of F. F holds edge indices of core.edges().
// Zero table when h < g + 1.
RationalTable gamma(const Core& core, const PatternGraph& H, const std::vector<int>& required, const RationalProb& p);

inline RationalTable gamma_edge(const Core& core, const PatternGraph& H, int edge, const RationalProb& p)
{
    return gamma(core, H, std::vector<int>{edge}, p);
}

// Edges by colour, largest first: edges[0] has colour g and touches the hub,
// edges.back() has colour g - b + 1 and holds the leaf v*.
struct DownwardTree {
    std::vector<int> edges;

    int size() const noexcept { return static_cast<int>(edges.size()); }
    int top_edge() const { return edges.front(); }
    int last_edge() const { return edges.back(); }

    friend bool operator==(const DownwardTree&, const DownwardTree&) = default;
};

// Empty when the edge set is a downward tree; otherwise the failed checks.
std::vector<std::string> downward_tree_problems(const Core& core, const std::vector<int>& edges);
inline bool is_downward_tree(const Core& core, const std::vector<int>& edges)
{
    return downward_tree_problems(core, edges).empty();
}
// Sorts the edges into the DownwardTree order; ValidationError if not a tree.
DownwardTree make_downward_tree(const Core& core, std::vector<int> edges);

// Every downward tree of size b, 1 <= b <= g.
std::vector<DownwardTree> enumerate_downward_trees(const Core& core, int b);

// The colour-(g-b+1) leaf of the tree.
int tree_leaf(const Core& core, const DownwardTree& tree);

nlohmann::json to_json(const DownwardTree& tree, const Core& core);

} // namespace aclab
