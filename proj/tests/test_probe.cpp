#include "doctest.h"

#include <cmath>

#include "aclab/cube.hpp"
#include "aclab/errors.hpp"
#include "aclab/expectation.hpp"
#include "aclab/fixtures.hpp"
#include "aclab/gnp.hpp"
#include "aclab/lattice.hpp"
#include "aclab/probes.hpp"
#include "aclab/psi.hpp"
#include "aclab/rng.hpp"

using namespace aclab;

namespace {

std::vector<Rational> rvec(std::initializer_list<long> xs)
{
    std::vector<Rational> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

// Integer-scaled enumeration of [-50, 50]^d.
std::uint64_t brute_lattice(const std::vector<std::vector<Rational>>& basis, const std::vector<Rational>& x,
                            const Rational& z)
{
    const std::size_t d = basis.size();
    BigInt L = z.get_den();
    for (const auto& v : basis)
        for (const auto& q : v) L = lcm(L, BigInt(q.get_den()));
    for (const auto& q : x) L = lcm(L, BigInt(q.get_den()));
    auto scaled = [&](const Rational& q) { return Rational(q * L).get_num().get_si(); };
    std::vector<std::vector<long>> B(d, std::vector<long>(d));
    std::vector<long> X(d);
    for (std::size_t i = 0; i < d; ++i) {
        X[i] = scaled(x[i]);
        for (std::size_t k = 0; k < d; ++k) B[i][k] = scaled(basis[i][k]);
    }
    const long Z = scaled(z);
    std::uint64_t count = 0;
    std::vector<long> t(d, -50);
    while (true) {
        bool inside = true;
        for (std::size_t k = 0; k < d && inside; ++k) {
            long s = -X[k];
            for (std::size_t i = 0; i < d; ++i) s += t[i] * B[i][k];
            inside = std::labs(s) < Z;
        }
        count += inside;
        std::size_t i = 0;
        while (i < d && t[i] == 50) t[i++] = -50;
        if (i == d) break;
        ++t[i];
    }
    return count;
}

// Mean of f(G0) over every G0 on nU vertices, weighted exactly.
template <class F>
RationalTable exhaustive_mean(int nU, const RationalProb& p, const std::vector<int>& shape, F f)
{
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < nU; ++a)
        for (int b = a + 1; b < nU; ++b) pairs.emplace_back(a, b);
    RationalTable out(shape, Rational(0));
    for (std::uint32_t m = 0; m < (1u << pairs.size()); ++m) {
        Graph G0(nU);
        int e = 0;
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if ((m >> k) & 1u) {
                G0.add_edge(pairs[k].first, pairs[k].second);
                ++e;
            }
        const Rational w = rational_pow(p.value(), static_cast<unsigned>(e)) *
                           rational_pow(p.complement(), static_cast<unsigned>(pairs.size() - e));
        const IntTable t = f(G0);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * Rational(static_cast<long>(t[k]));
    }
    return out;
}

RestrictedColourSystem small_restricted(std::vector<int> a, std::vector<int> t_lower, int nU, const RationalProb& p,
                                        std::uint64_t seed)
{
    ColourParams P;
    P.g = static_cast<int>(a.size());
    P.a = std::move(a);
    P.t = std::move(t_lower);
    P.t.push_back(1);
    FixtureOptions opt;
    opt.uncoloured = nU;
    opt.p = p;
    opt.restricted = true;
    return random_restricted_system(P, opt, seed);
}

Extension with_member(Extension S, std::size_t slot, int u, bool member)
{
    auto& s = S.sets[slot];
    std::erase(s, u);
    if (member) {
        s.push_back(u);
        std::sort(s.begin(), s.end());
    }
    return S;
}

} // namespace

TEST_CASE("lattice count small cases")
{
    CHECK(lattice_count({rvec({1})}, rvec({0}), Rational(5, 2)).count == 5);
    CHECK(lattice_count({rvec({1, 0}), rvec({0, 1})}, rvec({0, 0}), Rational(3, 2)).count == 9);
    // boundary is excluded
    CHECK(lattice_count({rvec({1})}, rvec({0}), Rational(2)).count == 3);
    CHECK_THROWS_AS(lattice_count({rvec({1, 2}), rvec({2, 4})}, rvec({0, 0}), Rational(2)), ValidationError);
    CHECK_THROWS_AS(lattice_count({rvec({1})}, rvec({0}), Rational(1, 2)), ValidationError);
    CHECK_THROWS_AS(lattice_count({{Rational(1, 1000000)}}, rvec({0}), Rational(100)), CapacityError);
}

TEST_CASE("lattice count matches brute force on random bases")
{
    Engine rng(2024);
    std::uniform_int_distribution<int> num(-6, 6), den(1, 3), zz(2, 20), dim(1, 3);
    int done = 0;
    while (done < 50) {
        const int d = dim(rng);
        std::vector<std::vector<Rational>> basis(static_cast<std::size_t>(d));
        std::vector<Rational> x;
        for (auto& v : basis)
            for (int k = 0; k < d; ++k) v.emplace_back(Rational(num(rng), den(rng)));
        for (int k = 0; k < d; ++k) x.emplace_back(Rational(num(rng), den(rng)));
        for (auto& v : basis)
            for (auto& q : v) q.canonicalize();
        for (auto& q : x) q.canonicalize();
        Rational z(zz(rng), 2);
        z.canonicalize();
        LatticeCount lc;
        try {
            lc = lattice_count(basis, x, z);
        } catch (const ValidationError&) {
            continue;   // dependent draw
        }
        bool fits = true;
        for (int k = 0; k < d; ++k) fits = fits && lc.low[k] >= -50 && lc.high[k] <= 50;
        if (!fits) continue;
        CHECK(lc.count == brute_lattice(basis, x, z));
        ++done;
    }
}

TEST_CASE("small ball on a binomial")
{
    std::vector<std::vector<double>> ones(20, std::vector<double>{1.0});
    const CubeFunction f = CubeFunction::linear(ones);
    const auto est = small_ball_estimate(f, {10.0}, 0.5, RationalProb(1, 2), 20000, 7, 1);
    const double exact = 184756.0 / 1048576.0;
    CHECK(est.interval.contains(exact));
    CHECK(small_ball_estimate(f, {10.0}, 0.0, RationalProb(1, 2), 100, 7, 1).estimate == 0.0);
    const CubeFunction c(5, 1, [](const CubePoint&) { return std::vector<double>{3.0}; });
    CHECK(small_ball_estimate(c, {3.0}, 1e-9, RationalProb(1, 3), 100, 7, 1).estimate == 1.0);
}

TEST_CASE("small ball lands in its interval across seeds")
{
    std::vector<std::vector<double>> ones(20, std::vector<double>{1.0});
    const CubeFunction f = CubeFunction::linear(ones);
    const double exact = 184756.0 / 1048576.0;
    int inside = 0;
    for (std::uint64_t s = 0; s < 100; ++s)
        inside += small_ball_estimate(f, {10.0}, 0.5, RationalProb(1, 2), 2000, s, 1).interval.contains(exact);
    CHECK(inside >= 93);
}

TEST_CASE("delta profile")
{
    std::vector<std::vector<double>> coef{{1.0, 0.0}, {0.0, 2.0}, {1.0, 1.0}};
    const CubeFunction f = CubeFunction::linear(coef);
    const auto prof = delta_profile(f, 1, RationalProb(1, 2), {0.0, 2.0}, 1e-6, 200, 3, 1);
    CHECK(prof.deviation.successes == 0);
    const CubeFunction c(4, 1, [](const CubePoint&) { return std::vector<double>{1.0}; });
    CHECK(delta_profile(c, 0, RationalProb(1, 2), {1.0}, 0.5, 50, 3, 1).deviation.estimate == 1.0);
    // subgraph count: mean of the triangle delta is 6 (n - 2) p^2
    const CubeFunction tri = CubeFunction::subgraph_count(PatternGraph::named("K3"), 12);
    const auto tp = delta_profile(tri, 0, RationalProb(1, 2), {15.0}, 100.0, 4000, 5, 1);
    CHECK(tp.mean[0] == doctest::Approx(15.0).epsilon(0.05));
}

TEST_CASE("delta of a generic function ignores the coordinate itself")
{
    const CubeFunction f(3, 1, [](const CubePoint& x) { return std::vector<double>{double(x[0] * x[1] + x[2])}; });
    CubePoint a{1, 1, 0}, b{0, 1, 0};
    CHECK(f.delta(a, 0) == f.delta(b, 0));
    CHECK(f.delta(a, 0)[0] == 1.0);
}

TEST_CASE("Halasz report on a linear function")
{
    auto [f, cfg] = linear_halasz_setup(100, 2, RationalProb(1, 2), 20000, 11);
    const HalaszReport rep = halasz_report(f, cfg, 1);
    CHECK(rep.hypothesis_max_frequency == 0.0);
    CHECK(rep.warnings.empty());
    CHECK(rep.radius == 1.0);
    CHECK(rep.shape == doctest::Approx(0.01));
    // exact: Pr(Bin(50, 1/2) = 25)^2
    const double b = 126410606437752.0 / 1125899906842624.0;
    CHECK(rep.small_ball.interval.contains(b * b));
    CHECK(rep.threshold_substituted);
}

TEST_CASE("Halasz report flags a violated hypothesis and bad configs")
{
    auto [f, cfg] = linear_halasz_setup(40, 2, RationalProb(1, 2), 200, 1);
    const CubeFunction flat(40, 2, [](const CubePoint&) { return std::vector<double>{0.0, 0.0}; });
    const HalaszReport rep = halasz_report(flat, cfg, 1);
    CHECK(rep.hypothesis_max_frequency == 1.0);
    CHECK(rep.warnings.size() == 1);

    HalaszConfig overlap = cfg;
    overlap.classes[1][0] = overlap.classes[0][0];
    CHECK_THROWS_AS(halasz_report(f, overlap, 1), ValidationError);
    HalaszConfig small_r = cfg;
    small_r.r /= 2;
    CHECK_THROWS_AS(halasz_report(f, small_r, 1), ValidationError);
    HalaszConfig flat_dirs = cfg;
    flat_dirs.directions[1] = flat_dirs.directions[0];
    CHECK_THROWS_AS(halasz_report(f, flat_dirs, 1), ValidationError);
}

TEST_CASE("Halasz d = 1 matches the Littlewood-Offord rate")
{
    auto [f, cfg] = linear_halasz_setup(400, 1, RationalProb(1, 2), 40000, 4);
    const HalaszReport rep = halasz_report(f, cfg, 1);
    // Pr(Bin(400, 1/2) = 200) ~ sqrt(2 / (pi 400)); shape is 1/sqrt(400)
    CHECK(rep.shape == doctest::Approx(1.0 / 20.0));
    CHECK(rep.fitted_c == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(0.1));
}

TEST_CASE("exact mu closed forms")
{
    const RationalProb p(1, 3);
    const auto rcs = small_restricted({1}, {}, 6, p, 5);
    Extension S = sample_extension(rcs, p, 9);
    S.sets[0] = {1, 2, 4, 5};
    const long k = static_cast<long>(S.sets[0].size());
    CHECK(exact_mu(rcs, S, PatternGraph::named("K2"), p)[0] == Rational(2 * k));
    CHECK(exact_mu(rcs, S, PatternGraph::named("K3"), p)[0] == Rational(6 * k * (k - 1) / 2) * p.value());
}

TEST_CASE("exact mu equals the exhaustive G0 mean")
{
    const RationalProb p(1, 3);
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 4; ++seed)
        for (const auto& [a, t] : std::vector<std::pair<std::vector<int>, std::vector<int>>>{
                 {{1}, {}}, {{2}, {}}, {{1, 1}, {2}}, {{2, 1}, {1}}})
            for (int nU : {3, 5}) {
                const auto rcs = small_restricted(a, t, nU, p, seed);
                const Extension S = sample_extension(rcs, p, seed + 100);
                const ColourSystem sys = apply_extension(rcs, S);
                for (const char* name : {"K2", "K3", "P3", "C4"}) {
                    const PatternGraph H = PatternGraph::named(name);
                    const auto mean = exhaustive_mean(nU, p, sys.params().shape(),
                                                      [&](const Graph& G0) { return psi_table(H, sys, G0); });
                    CHECK(exact_mu(rcs, S, H, p) == mean);
                    ++checked;
                }
            }
    CHECK(checked == 128);
}

TEST_CASE("averaged mu equals the mean over extensions")
{
    const RationalProb p(1, 2);
    const auto rcs = small_restricted({1, 1}, {2}, 3, p, 8);
    const PatternGraph H = PatternGraph::named("K3");
    const auto& cs = rcs.system();
    const auto& top = rcs.top_vertices();
    const auto& U = cs.uncoloured();
    RationalTable mean(cs.params().shape(), Rational(0));
    const std::size_t coins = top.size() * U.size();
    for (std::uint32_t m = 0; m < (1u << coins); ++m) {
        Extension S;
        S.vertices = top;
        S.sets.assign(top.size(), {});
        int on = 0;
        for (std::size_t k = 0; k < coins; ++k)
            if ((m >> k) & 1u) {
                S.sets[k / U.size()].push_back(U[k % U.size()]);
                ++on;
            }
        const Rational w = rational_pow(p.value(), static_cast<unsigned>(on)) *
                           rational_pow(p.complement(), static_cast<unsigned>(coins - on));
        const RationalTable mu = exact_mu(rcs, S, H, p);
        for (std::size_t f = 0; f < mean.size(); ++f) mean[f] += w * mu[f];
    }
    CHECK(exact_mu_averaged(rcs, H, p) == mean);
}

TEST_CASE("exact nu matches kappa means and the mu difference")
{
    const RationalProb p(2, 5);
    for (std::uint64_t seed = 0; seed < 3; ++seed)
        for (const auto& [a, t] : std::vector<std::pair<std::vector<int>, std::vector<int>>>{{{1}, {}}, {{1, 2}, {2}}}) {
            const auto rcs = small_restricted(a, t, 5, p, seed);
            const Extension S = sample_extension(rcs, p, seed + 7);
            const auto& cs = rcs.system();
            const int u = cs.uncoloured()[1];
            const int v = rcs.top_vertices().back();
            const std::size_t slot = rcs.top_vertices().size() - 1;
            for (const char* name : {"K2", "K3", "P3", "C4"}) {
                const PatternGraph H = PatternGraph::named(name);
                const RationalTable nu = exact_nu(rcs, S, H, p, u, v);
                const ColourSystem sys = apply_extension(rcs, S);
                CHECK(nu == exhaustive_mean(5, p, cs.params().shape(),
                                            [&](const Graph& G0) { return kappa_table(H, sys, G0, u, v); }));
                const RationalTable in = exact_mu(rcs, with_member(S, slot, u, true), H, p);
                const RationalTable out = exact_mu(rcs, with_member(S, slot, u, false), H, p);
                for (std::size_t f = 0; f < nu.size(); ++f) CHECK(nu[f] == in[f] - out[f]);
            }
        }
}

TEST_CASE("exact nu rejects bad endpoints")
{
    const RationalProb p(1, 2);
    const auto rcs = small_restricted({1}, {}, 4, p, 1);
    const Extension S = sample_extension(rcs, p, 1);
    const int v = rcs.top_vertices()[0];
    CHECK_THROWS_AS(exact_nu(rcs, S, PatternGraph::named("K3"), p, v, v), ValidationError);
    CHECK_THROWS_AS(exact_nu(rcs, S, PatternGraph::named("K3"), p, rcs.system().uncoloured()[0],
                             rcs.system().uncoloured()[1]),
                    ValidationError);
}

TEST_CASE("expectation budget guard")
{
    const RationalProb p(1, 2);
    const auto rcs = small_restricted({40}, {}, 10, p, 1);
    const Extension S = sample_extension(rcs, p, 1);
    CHECK_THROWS_AS(exact_mu(rcs, S, PatternGraph::named("K6"), p), CapacityError);
}

TEST_CASE("nu gamma check")
{
    const RationalProb p(1, 2);
    const auto rcs = small_restricted({1}, {}, 60, p, 3);
    const Extension S = sample_extension(rcs, p, 4);
    const int u = rcs.system().uncoloured()[0];
    const int v = rcs.top_vertices()[0];
    const auto rep = nu_gamma_check(rcs, S, PatternGraph::named("K3"), p, u, v);
    // g = 1: Gamma is 6 p^2, scaled by n
    CHECK(rep.scaled_gamma[0] == Rational(6 * rep.n) * Rational(1, 4));
    CHECK(rep.deviation == abs(rep.nu[0] - rep.scaled_gamma[0]));
    CHECK(std::isfinite(rep.ratio));

    const RationalProb one(1, 1);
    const auto full = small_restricted({1}, {}, 20, one, 3);
    const auto rf = nu_gamma_check(full, sample_extension(full, one, 1), PatternGraph::named("K3"), one,
                                   full.system().uncoloured()[0], full.top_vertices()[0]);
    // every third vertex works: 6 (n - 2) against 6 n
    CHECK(rf.deviation == Rational(12));

    // an empty extension is far from general position
    const auto wide = small_restricted({1}, {}, 3000, p, 3);
    Extension empty = sample_extension(wide, p, 4);
    for (auto& s : empty.sets) s.clear();
    const auto bad = nu_gamma_check(wide, empty, PatternGraph::named("K3"), p, wide.system().uncoloured()[0],
                                    wide.top_vertices()[0]);
    CHECK(!bad.warnings.empty());
}

TEST_CASE("kappa gamma check")
{
    ColourParams P;
    P.g = 0;
    FixtureOptions opt;
    opt.uncoloured = 200;
    const ColourSystem cs = random_colour_system(P, opt, 1);
    const RationalProb p(1, 2);
    const auto rep = kappa_gamma_check(cs, PatternGraph::named("K3"), p, 0, 0, 1, 40, 9, 1);
    CHECK(rep.ratios.size() == 40);
    CHECK(rep.max < 5.0);
    CHECK(rep.median <= rep.max);
    CHECK_THROWS_AS(kappa_gamma_check(cs, PatternGraph::named("K3"), p, 0, 3, 3, 10, 9, 1), ValidationError);
    const RationalProb one(1, 1);
    const auto det = kappa_gamma_check(cs, PatternGraph::named("K3"), one, 0, 0, 1, 5, 9, 1);
    CHECK(det.max == det.median);
}

TEST_CASE("concentration probe")
{
    const RationalProb p(1, 2);
    const auto rcs = small_restricted({1}, {}, 60, p, 2);
    const PatternGraph K3 = PatternGraph::named("K3");
    const auto fine = concentration_probe(rcs, K3, p, ConcentrationScale::GivenExtension, 30, 5, 1);
    CHECK(fine.violations.trials == 30);
    CHECK(fine.violations.successes == 0);
    const auto coarse = concentration_probe(rcs, K3, p, ConcentrationScale::Averaged, 30, 5, 1);
    CHECK(coarse.violations.successes == 0);
    const RationalProb one(1, 1);
    const auto full = small_restricted({1}, {}, 30, one, 2);
    CHECK(concentration_probe(full, K3, one, ConcentrationScale::GivenExtension, 5, 5, 1).max_ratio == 0.0);
    const RationalProb zero(0, 1);
    const auto none = small_restricted({1}, {}, 30, zero, 2);
    CHECK(concentration_probe(none, K3, zero, ConcentrationScale::Averaged, 5, 5, 1).max_ratio == 0.0);
}

TEST_CASE("scale probes")
{
    const RationalProb p(1, 2);
    const auto rcs = small_restricted({1}, {}, 40, p, 2);
    const PatternGraph K3 = PatternGraph::named("K3");
    RationalTable far(rcs.system().params().shape(), Rational(1000000000));
    CHECK(medium_scale_probe(rcs, K3, p, far, 20, 3, 1).estimate == 0.0);
    const auto near = medium_scale_probe(rcs, K3, p, exact_mu_averaged(rcs, K3, p), 20, 3, 1);
    CHECK(near.estimate > 0.0);
    CHECK(near.interval.contains(near.estimate));

    ColourParams P;
    P.g = 0;
    FixtureOptions opt;
    opt.uncoloured = 30;
    const ColourSystem cs = random_colour_system(P, opt, 1);
    RationalTable farpsi(cs.params().shape(), Rational(1000000000));
    CHECK(rough_scale_probe(cs, K3, p, farpsi, 20, 3, 1).estimate == 0.0);
    RationalTable mean(cs.params().shape(), expected_count(K3, 30, p));
    CHECK(rough_scale_probe(cs, K3, p, mean, 20, 3, 1).estimate > 0.5);
}

TEST_CASE("probes do not depend on the worker count")
{
    const RationalProb p(1, 2);
    const auto rcs = small_restricted({1}, {}, 40, p, 2);
    const PatternGraph K3 = PatternGraph::named("K3");
    const auto a = concentration_probe(rcs, K3, p, ConcentrationScale::GivenExtension, 24, 5, 1);
    const auto b = concentration_probe(rcs, K3, p, ConcentrationScale::GivenExtension, 24, 5, 4);
    CHECK(to_json(a).dump() == to_json(b).dump());
    auto [f, cfg] = linear_halasz_setup(60, 2, p, 3000, 2);
    CHECK(to_json(halasz_report(f, cfg, 1)).dump() == to_json(halasz_report(f, cfg, 8)).dump());
}
