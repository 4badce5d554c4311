#include "aclab/gnp.hpp"

#include <unordered_map>

#include "aclab/counting.hpp"
#include "aclab/errors.hpp"
#include "aclab/parallel.hpp"
#include "aclab/rng.hpp"

namespace aclab {

Graph sample_gnp(int n, const RationalProb& p, std::uint64_t seed)
{
    if (n < 1) throw ValidationError("sample_gnp needs n >= 1");
    Graph g(n);
    Engine engine(seed);
    BernoulliStream coin(engine, p);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin.next()) g.add_edge(u, v);
    return g;
}

Rational ExactDistribution::total() const
{
    Rational s = 0;
    for (const auto& [x, q] : support) s += q;
    return s;
}

Rational ExactDistribution::mean() const
{
    Rational s = 0;
    for (const auto& [x, q] : support) s += q * Rational(static_cast<long>(x));
    return s;
}

Rational ExactDistribution::max_point_probability() const
{
    Rational best = 0;
    for (const auto& [x, q] : support)
        if (q > best) best = q;
    return best;
}

ExactDistribution exact_distribution(const PatternGraph& H, int n, const RationalProb& p, int max_pairs)
{
    if (n < 1) throw ValidationError("exact_distribution needs n >= 1");
    const long long m = static_cast<long long>(n) * (n - 1) / 2;
    if (m > max_pairs || m > 40)
        throw CapacityError("exhaustive enumeration needs 2^" + std::to_string(m) + " graphs (C(n,2) = " +
                            std::to_string(m) + " exceeds the cutoff " + std::to_string(max_pairs) + ")");
    check_count_capacity(H, n);

    std::vector<Edge> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);

    // tally[x][e] = number of graphs with e edges and count x
    std::unordered_map<std::int64_t, std::vector<std::uint64_t>> tally;
    auto record = [&](std::int64_t x, std::int64_t e) {
        auto& row = tally[x];
        if (row.empty()) row.assign(static_cast<std::size_t>(m + 1), 0);
        ++row[static_cast<std::size_t>(e)];
    };

    Graph g(n);
    std::int64_t x = count_labelled_copies(H, g);
    record(x, 0);
    const std::uint64_t steps = std::uint64_t{1} << m;
    for (std::uint64_t i = 1; i < steps; ++i) {
        const auto [u, v] = pairs[static_cast<std::size_t>(std::countr_zero(i))];
        const std::int64_t d = delta_edge(H, g, u, v);
        if (g.toggle_edge(u, v)) x += d;
        else x -= d;
        record(x, g.edge_count());
    }

    std::vector<Rational> weight(static_cast<std::size_t>(m + 1));
    for (long long e = 0; e <= m; ++e)
        weight[static_cast<std::size_t>(e)] =
            rational_pow(p.value(), static_cast<unsigned>(e)) * rational_pow(p.complement(), static_cast<unsigned>(m - e));

    ExactDistribution out{H, n, p, {}};
    for (const auto& [value, row] : tally) {
        Rational q = 0;
        for (std::size_t e = 0; e < row.size(); ++e)
            if (row[e]) q += Rational(BigInt(static_cast<unsigned long>(row[e]))) * weight[e];
        if (q != 0) out.support[value] = q;
    }
    return out;
}

Rational expected_count(const PatternGraph& H, int n, const RationalProb& p)
{
    BigInt falling = 1;
    for (int i = 0; i < H.h(); ++i) falling *= (n - i > 0 ? n - i : 0);
    return Rational(falling) * rational_pow(p.value(), static_cast<unsigned>(H.e()));
}

PointProbEstimate point_prob_estimate(const PatternGraph& H, int n, const RationalProb& p, std::uint64_t trials,
                                      std::uint64_t seed, unsigned workers)
{
    if (trials < 1) throw ValidationError("point_prob_estimate needs trials >= 1");
    if (n < 1) throw ValidationError("point_prob_estimate needs n >= 1");
    check_count_capacity(H, n);
    std::vector<std::int64_t> values(trials);
    for_each_trial(trials, resolve_workers(workers), [&](std::uint64_t t) {
        values[t] = count_labelled_copies(H, sample_gnp(n, p, derive_seed(seed, "gnp", t)));
    });
    PointProbEstimate out;
    for (auto v : values) ++out.histogram[v];
    std::uint64_t best = 0;
    for (const auto& [v, c] : out.histogram)
        if (c > best) {
            best = c;
            out.mode = v;
        }
    out.result = make_estimate(best, trials, seed);
    return out;
}

} // namespace aclab
