#include "aclab/span.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

#include "aclab/errors.hpp"

namespace aclab {

namespace {

int other_end(const ColourEdge& e, int v) { return e.u == v ? e.v : e.u; }

int build_node(const Core& core, const DownwardTree& tree, std::vector<SpanCertificate::Node>& nodes)
{
    const int idx = static_cast<int>(nodes.size());
    nodes.push_back({tree, -1, -1});
    if (tree.size() == 1) return idx;

    const auto& cs = core.system();
    const int g = core.g();
    const int c = g - tree.size() + 1;
    const ColourEdge& estar = core.edge(tree.last_edge());
    const int vstar = tree_leaf(core, tree);
    const int w = other_end(estar, vstar);
    const std::vector<int> rest(tree.edges.begin(), tree.edges.end() - 1);

    std::vector<int> v(static_cast<std::size_t>(g + 1), -1);
    for (int k : rest)
        for (int x : {core.edge(k).u, core.edge(k).v})
            if (x != core.hub()) v[static_cast<std::size_t>(cs.colour(x))] = x;

    std::vector<int> lower;   // every vertex of colours 1..c
    for (int i = 1; i <= c; ++i)
        for (int y : cs.colour_class(i)) lower.push_back(y);

    std::vector<int> moved(static_cast<std::size_t>(g + 1), -1);
    for (int i = c + 1; i <= g; ++i) {
        const int vi = v[static_cast<std::size_t>(i)];
        for (int x : cs.colour_class(i)) {
            bool ok = true;
            for (int j = c + 1; j < i && ok; ++j)
                ok = cs.shades_between(x, moved[static_cast<std::size_t>(j)], j) ==
                     cs.shades_between(vi, v[static_cast<std::size_t>(j)], j);
            for (std::size_t q = 0; q < lower.size() && ok; ++q) {
                const int y = lower[q];
                const int cy = cs.colour(y);
                std::uint64_t target = cs.shades_between(vi, y, cy);
                if (vi == w && y == vstar) target &= ~(std::uint64_t{1} << (estar.shade - 1));
                ok = cs.shades_between(x, y, cy) == target;
            }
            if (ok) {
                moved[static_cast<std::size_t>(i)] = x;
                break;
            }
        }
        if (moved[static_cast<std::size_t>(i)] < 0) throw PreconditionError("witness not found");
    }

    std::vector<int> shifted_edges;
    for (int k : rest) {
        const auto& e = core.edge(k);
        int a = e.u == core.hub() ? core.hub() : moved[static_cast<std::size_t>(cs.colour(e.u))];
        int b = e.v == core.hub() ? core.hub() : moved[static_cast<std::size_t>(cs.colour(e.v))];
        const int k2 = core.edge_index(a, b, e.colour, e.shade);
        if (k2 < 0) throw std::logic_error("shifted tree edge missing");
        shifted_edges.push_back(k2);
    }

    const int keep = build_node(core, DownwardTree{rest}, nodes);
    const int shifted = build_node(core, DownwardTree{shifted_edges}, nodes);
    nodes[static_cast<std::size_t>(idx)].keep = keep;
    nodes[static_cast<std::size_t>(idx)].shifted = shifted;
    return idx;
}

int node_depth(const std::vector<SpanCertificate::Node>& nodes, int i)
{
    const auto& n = nodes[static_cast<std::size_t>(i)];
    if (n.leaf()) return 1;
    return 1 + std::max(node_depth(nodes, n.keep), node_depth(nodes, n.shifted));
}

void accumulate(const std::vector<SpanCertificate::Node>& nodes, int i, int sign, std::map<int, BigInt>& acc)
{
    const auto& n = nodes[static_cast<std::size_t>(i)];
    if (n.leaf()) {
        acc[n.tree.edges.front()] += sign;
        return;
    }
    accumulate(nodes, n.keep, sign, acc);
    accumulate(nodes, n.shifted, -sign, acc);
}

} // namespace

SpanCertificate express_tree_gamma(const Core& core, const PatternGraph& H, const DownwardTree& tree,
                                   const RationalProb& p)
{
    const DownwardTree canon = make_downward_tree(core, tree.edges);
    SpanCertificate cert;
    build_node(core, canon, cert.nodes);
    cert.depth = node_depth(cert.nodes, 0);
    std::map<int, BigInt> acc;
    accumulate(cert.nodes, 0, 1, acc);
    for (auto& [k, coef] : acc)
        if (coef != 0) cert.coefficients.emplace_back(k, coef);
    cert.value = evaluate_certificate(cert, core, H, p);
    return cert;
}

RationalTable evaluate_certificate(const SpanCertificate& cert, const Core& core, const PatternGraph& H,
                                   const RationalProb& p)
{
    RationalTable out(core.shape(), Rational(0));
    for (const auto& [k, coef] : cert.coefficients) {
        const RationalTable row = gamma_edge(core, H, k, p);
        const Rational c(coef);
        for (std::size_t f = 0; f < out.size(); ++f) out[f] += c * row[f];
    }
    return out;
}

int exact_rank(const std::vector<std::vector<Rational>>& rows, std::vector<int>* pivots)
{
    const std::size_t m = rows.size();
    if (m == 0) {
        if (pivots) pivots->clear();
        return 0;
    }
    const std::size_t n = rows.front().size();
    std::vector<std::vector<BigInt>> M(m, std::vector<BigInt>(n));
    for (std::size_t i = 0; i < m; ++i) {
        BigInt scale = 1;
        for (const auto& q : rows[i]) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), q.get_den_mpz_t());
        for (std::size_t j = 0; j < n; ++j) M[i][j] = rows[i][j].get_num() * (scale / rows[i][j].get_den());
    }
    std::vector<int> origin(m);
    std::iota(origin.begin(), origin.end(), 0);
    BigInt prev = 1;
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < m; ++col) {
        std::size_t piv = r;
        while (piv < m && M[piv][col] == 0) ++piv;
        if (piv == m) continue;
        std::swap(M[r], M[piv]);
        std::swap(origin[r], origin[piv]);
        for (std::size_t i = r + 1; i < m; ++i) {
            for (std::size_t j = col + 1; j < n; ++j) {
                BigInt x = M[r][col] * M[i][j] - M[i][col] * M[r][j];
                if (x % prev != 0) throw std::logic_error("fraction-free elimination lost exactness");
                mpz_divexact(M[i][j].get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
            }
            M[i][col] = 0;
        }
        prev = M[r][col];
        ++r;
    }
    if (pivots) {
        pivots->assign(origin.begin(), origin.begin() + static_cast<std::ptrdiff_t>(r));
        std::sort(pivots->begin(), pivots->end());
    }
    return static_cast<int>(r);
}

SpanRank span_rank(const Core& core, const PatternGraph& H, const RationalProb& p)
{
    SpanRank out;
    out.T = core.g() >= 1 ? core.system().params().T() : 1;
    std::vector<std::vector<Rational>> matrix;
    for (int k : core.top_edges()) {
        out.rows.push_back(gamma_edge(core, H, k, p));
        matrix.push_back(out.rows.back().entries());
    }
    std::vector<int> piv;
    out.rank = exact_rank(matrix, &piv);
    for (int i : piv) out.basis.push_back(core.top_edges()[static_cast<std::size_t>(i)]);
    return out;
}

PositivityWitness positivity_witness(const Core& core, const PatternGraph& H, const ShadeTuple& shades,
                                     const RationalProb& p)
{
    const auto& cs = core.system();
    const int g = core.g();
    if (g < 1) throw PreconditionError("positivity witness needs g >= 1");
    if (!H.connected()) throw PreconditionError("positivity witness needs a connected pattern");
    if (H.h() < g + 1) throw PreconditionError("positivity witness needs h >= g + 1");
    const RationalTable probe(core.shape());
    probe.flat_index(shades);   // range check

    PositivityWitness out;
    for (int i = 1; i <= g; ++i) {
        int pick = -1;
        for (int x : cs.colour_class(i)) {
            bool ok = true;
            for (int j = 1; j < i && ok; ++j) {
                const int t = cs.params().t[static_cast<std::size_t>(j - 1)];
                const std::uint64_t all = t >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << t) - 1;
                ok = cs.shades_between(x, out.chain[static_cast<std::size_t>(j - 1)], j) == all;
            }
            if (ok) {
                pick = x;
                break;
            }
        }
        if (pick < 0) throw PreconditionError("core is not complete: no colour-" + std::to_string(i) + " chain vertex");
        out.chain.push_back(pick);
    }

    // First g+1 vertices of a BFS from vertex 0, with their BFS parent edges.
    std::vector<int> parent(static_cast<std::size_t>(H.h()), -2);
    std::vector<int> order;
    std::deque<int> queue{0};
    parent[0] = -1;
    while (!queue.empty() && static_cast<int>(order.size()) < g + 1) {
        const int x = queue.front();
        queue.pop_front();
        order.push_back(x);
        for (int y = 0; y < H.h(); ++y)
            if (H.adjacent(x, y) && parent[static_cast<std::size_t>(y)] == -2) {
                parent[static_cast<std::size_t>(y)] = x;
                queue.push_back(y);
            }
    }
    std::vector<std::pair<int, int>> tree_edges;
    std::map<int, std::vector<int>> adj;
    for (std::size_t k = 1; k < order.size(); ++k) {
        const int x = order[k], y = parent[static_cast<std::size_t>(x)];
        tree_edges.emplace_back(x, y);
        adj[x].push_back(y);
        adj[y].push_back(x);
    }
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int x : sorted)
        if (adj[x].size() == 1) {
            out.leaf = x;
            break;
        }

    std::map<int, int> dist{{out.leaf, 0}};
    std::deque<int> q2{out.leaf};
    while (!q2.empty()) {
        const int x = q2.front();
        q2.pop_front();
        for (int y : adj[x])
            if (!dist.count(y)) {
                dist[y] = dist[x] + 1;
                q2.push_back(y);
            }
    }
    std::vector<int> rest;
    for (int x : sorted)
        if (x != out.leaf) rest.push_back(x);
    std::stable_sort(rest.begin(), rest.end(), [&](int a, int b) { return dist[a] > dist[b]; });

    std::map<int, int> image{{out.leaf, core.hub()}};
    out.subtree.push_back(out.leaf);
    for (std::size_t i = 0; i < rest.size(); ++i) {
        image[rest[i]] = out.chain[i];
        out.subtree.push_back(rest[i]);
    }
    std::vector<int> edges;
    for (const auto& [x, y] : tree_edges) {
        const int a = image[x], b = image[y];
        const int colour = std::min(cs.colour(a), cs.colour(b));
        const int shade = shades[static_cast<std::size_t>(colour - 1)];
        const int k = core.edge_index(a, b, colour, shade);
        if (k < 0) throw PreconditionError("core is not complete: chain edge missing");
        edges.push_back(k);
    }
    out.tree = make_downward_tree(core, edges);
    out.value = gamma(core, H, out.tree.edges, p).at(shades);
    return out;
}

nlohmann::json to_json(const SpanCertificate& cert, const Core& core)
{
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : cert.nodes) {
        nlohmann::json j = to_json(n.tree, core);
        if (!n.leaf()) {
            j["keep"] = n.keep;
            j["shifted"] = n.shifted;
        }
        nodes.push_back(std::move(j));
    }
    nlohmann::json coefs = nlohmann::json::array();
    for (const auto& [k, c] : cert.coefficients) coefs.push_back({{"edge", k}, {"coefficient", c.get_str()}});
    return {{"depth", cert.depth}, {"nodes", nodes}, {"coefficients", coefs}, {"value", to_json(cert.value)}};
}

} // namespace aclab
