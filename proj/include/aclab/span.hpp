#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "aclab/gamma.hpp"

namespace aclab {

// Recursion tree of the membership argument for one downward tree. Node 0 is
// the target; an inner node's table equals keep minus shifted. Leaves are
// single hub edges.
struct SpanCertificate {
    struct Node {
        DownwardTree tree;
        int keep = -1;      // node index of tree without its colour-(g-b+1) edge
        int shifted = -1;   // node index of the witness-shifted copy
        bool leaf() const noexcept { return keep < 0; }
    };
    std::vector<Node> nodes;
    // Flattened integer combination over the hub edges (edge index, coefficient), nonzero only.
    std::vector<std::pair<int, BigInt>> coefficients;
    int depth = 0;
    // The combination evaluated on the Γ of each hub edge.
    RationalTable value;
};

// ValidationError if tree is not a downward tree; PreconditionError
// "witness not found" when the core lacks a needed completeness witness.
SpanCertificate express_tree_gamma(const Core& core, const PatternGraph& H, const DownwardTree& tree,
                                   const RationalProb& p);

// Recomputes the combination from scratch.
RationalTable evaluate_certificate(const SpanCertificate& cert, const Core& core, const PatternGraph& H,
                                   const RationalProb& p);

struct SpanRank {
    int rank = 0;
    std::uint64_t T = 0;
    std::vector<int> basis;               // hub edge indices whose rows are independent
    std::vector<RationalTable> rows;      // Γ of each hub edge, in top_edges() order
    bool spans() const noexcept { return static_cast<std::uint64_t>(rank) == T; }
};

// Rank of a rational matrix by fraction-free elimination; pivots gets the
// original row indices of an independent spanning subset.
int exact_rank(const std::vector<std::vector<Rational>>& rows, std::vector<int>* pivots = nullptr);

SpanRank span_rank(const Core& core, const PatternGraph& H, const RationalProb& p);

struct PositivityWitness {
    std::vector<int> chain;        // v_1 .. v_g
    std::vector<int> subtree;      // H vertices of the g-edge subtree, image order (hub first, then v_1..v_g)
    int leaf = -1;                 // H vertex sent to the hub
    DownwardTree tree;
    Rational value;
};

// PreconditionError when g = 0, H is disconnected, h < g + 1, or the core is
// not complete enough to build the chain.
PositivityWitness positivity_witness(const Core& core, const PatternGraph& H, const ShadeTuple& shades,
                                     const RationalProb& p);

nlohmann::json to_json(const SpanCertificate& cert, const Core& core);

} // namespace aclab
