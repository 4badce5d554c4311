#include "doctest.h"

#include <algorithm>
#include <set>

#include "aclab/counting.hpp"
#include "aclab/decompose.hpp"
#include "aclab/errors.hpp"
#include "aclab/extension.hpp"
#include "aclab/fixtures.hpp"
#include "aclab/gnp.hpp"
#include "aclab/psi.hpp"
#include "aclab/rng.hpp"
#include "aclab/structure.hpp"

using namespace aclab;

namespace {

constexpr int U_ = kUncoloured;

ColourParams params(std::vector<int> a, std::vector<int> t)
{
    return ColourParams{static_cast<int>(a.size()), std::move(a), std::move(t)};
}

bool has_rule(const ColourSystem& cs, const std::string& rule)
{
    const auto v = validate(cs);
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.rule == rule; });
}

// Injections of H into the realized graph whose image meets every colour.
std::int64_t brute_psi(const PatternGraph& H, const ColourSystem& cs, const Graph& G0, const ShadeTuple& j)
{
    const Graph R = realize(cs, G0, j);
    const int h = H.h(), n = R.n();
    std::vector<int> img(static_cast<std::size_t>(h));
    std::int64_t count = 0;
    auto rec = [&](auto&& self, int x) -> void {
        if (x == h) {
            for (const auto& [a, b] : H.edges())
                if (!R.has_edge(img[a], img[b])) return;
            std::set<int> colours;
            for (int v : img)
                if (cs.is_coloured(v)) colours.insert(cs.colour(v));
            count += static_cast<int>(colours.size()) == cs.g();
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (std::find(img.begin(), img.begin() + x, v) != img.begin() + x) continue;
            img[static_cast<std::size_t>(x)] = v;
            self(self, x + 1);
        }
    };
    rec(rec, 0);
    return count;
}

// Neighbours of coloured vertex c in shade s, as positions in U.
std::vector<int> shade_nbhd(const ColourSystem& cs, int c, int colour, int s)
{
    std::vector<int> out;
    for (int u : cs.uncoloured())
        if (cs.has_edge(c, u, colour, s)) out.push_back(cs.uncoloured_index(u));
    return out;
}

} // namespace

TEST_CASE("validation rules")
{
    // star: g = 1, a = 1, t = 2
    const ColourSystem star(params({1}, {2}), {1, U_, U_, U_}, {{0, 1, 1, 1}, {0, 2, 1, 2}, {0, 1, 1, 2}});
    CHECK(validate(star).empty());
    CHECK(has_rule(ColourSystem(params({1}, {1}), {1, U_, U_}, {{1, 2, 1, 1}}), "uncoloured-edge"));
    CHECK(has_rule(ColourSystem(params({}, {}), {U_, U_}, {{0, 1, 1, 1}}), "uncoloured-edge"));
    CHECK(has_rule(ColourSystem(params({1}, {2}), {1, U_}, {{0, 1, 1, 3}}), "shade-range"));
    CHECK(has_rule(ColourSystem(params({1}, {2}), {1, U_}, {{0, 1, 1, 1}, {1, 0, 1, 1}}), "duplicate-edge"));
    CHECK(has_rule(ColourSystem(params({2}, {1}), {1, U_}, {}), "colour-count"));
    CHECK(has_rule(ColourSystem(params({1, 1}, {1, 1}), {1, 2, U_}, {{0, 1, 2, 1}}), "edge-colour"));
    CHECK_THROWS_AS(require_valid(ColourSystem(params({2}, {1}), {1, U_}, {})), ValidationError);
    CHECK(colour_system_from_json(to_json(star)) == star);
}

TEST_CASE("completeness")
{
    CHECK(is_complete(ColourSystem(params({}, {}), {U_, U_}, {})));
    CHECK(!is_complete(ColourSystem(params({1, 1}, {1, 1}), {1, 2, U_}, {{0, 1, 1, 1}})));
    CHECK(is_complete(ColourSystem(params({1, 2}, {1, 1}), {1, 2, 2, U_}, {{0, 1, 1, 1}})));
    FixtureOptions opt;
    opt.complete = true;
    opt.uncoloured = 3;
    CHECK(is_complete(random_colour_system(params({1, 4, 64}, {2, 1, 1}), opt, 5)));
}

TEST_CASE("neighbourhood families")
{
    FixtureOptions opt;
    opt.uncoloured = 10;
    CHECK(neighbourhood_family(random_colour_system(params({}, {}), opt, 1)).m() == 0);
    CHECK(neighbourhood_family(random_colour_system(params({1}, {2}), opt, 1)).m() == 2);
    CHECK(neighbourhood_family(random_colour_system(params({2, 1}, {3, 1}), opt, 1)).m() == 7);
    const ColourSystem cs = random_colour_system(params({1}, {2}), opt, 1);
    const auto fam = neighbourhood_family(cs);
    for (int s = 1; s <= 2; ++s) CHECK(fam.sets[s - 1].members() == shade_nbhd(cs, 0, 1, s));
}

TEST_CASE("general position")
{
    SetFamily empty;
    for (int v = 0; v < 100; ++v) empty.ground.push_back(v);
    CHECK(general_position_check(empty, RationalProb(1, 2), 1).pass);
    SetFamily full = empty;
    full.sets.push_back(VertexSet::full(100));
    const auto rep = general_position_check(full, RationalProb(1, 2), 1);
    CHECK(!rep.pass);
    CHECK(rep.worst_deviation == doctest::Approx(50.0));
    CHECK(rep.threshold == doctest::Approx(46.0517).epsilon(1e-4));

    int passes = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        SetFamily f;
        for (int v = 0; v < 1000; ++v) f.ground.push_back(v);
        Engine e(derive_seed(3, "sets", s));
        BernoulliStream coin(e, RationalProb(1, 2));
        for (int k = 0; k < 4; ++k) {
            VertexSet set(1000);
            for (int v = 0; v < 1000; ++v)
                if (coin.next()) set.insert(v);
            f.sets.push_back(set);
        }
        passes += general_position_check(f, RationalProb(1, 2), 1).pass;
    }
    CHECK(passes >= 95);
}

TEST_CASE("generality classes")
{
    FixtureOptions opt;
    opt.uncoloured = 50;
    CHECK(classify_generality(random_colour_system(params({}, {}), opt, 2), RationalProb(1, 2)) ==
          Generality::PGeneral);
    opt.uncoloured = 1000;
    int general = 0;
    for (std::uint64_t s = 0; s < 100; ++s)
        general += classify_generality(random_colour_system(params({1}, {1}), opt, s), RationalProb(1, 2)) ==
                   Generality::PGeneral;
    CHECK(general >= 95);
}

TEST_CASE("realize")
{
    const RationalProb p(1, 2);
    FixtureOptions opt;
    opt.uncoloured = 7;
    const Graph G0 = sample_gnp(7, p, 3);
    CHECK(realize(random_colour_system(params({}, {}), opt, 2), G0, {}) == G0);
    CHECK_THROWS_AS(realize(random_colour_system(params({}, {}), opt, 2), Graph(6), {}), ValidationError);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const ColourSystem cs = random_colour_system(params({1, 2}, {2, 3}), opt, s);
        for (int j1 = 1; j1 <= 2; ++j1)
            for (int j2 = 1; j2 <= 3; ++j2) {
                std::int64_t expected = G0.edge_count();
                for (const auto& e : cs.edges())
                    expected += e.shade == (e.colour == 1 ? j1 : j2);
                CHECK(realize(cs, G0, {j1, j2}).edge_count() == expected);
            }
    }
}

TEST_CASE("psi tables")
{
    const RationalProb p(1, 2);
    FixtureOptions opt;
    opt.uncoloured = 8;
    const Graph G0 = sample_gnp(8, p, 11);
    const ColourSystem g0 = random_colour_system(params({}, {}), opt, 1);
    CHECK(psi_table(PatternGraph::named("C4"), g0, G0)[0] == count_labelled_copies(PatternGraph::named("C4"), G0));

    const ColourSystem star = random_colour_system(params({1}, {3}), opt, 4);
    const IntTable k2 = psi_table(PatternGraph::named("K2"), star, G0);
    const IntTable k3 = psi_table(PatternGraph::named("K3"), star, G0);
    for (int j = 1; j <= 3; ++j) {
        const auto S = shade_nbhd(star, 0, 1, j);
        CHECK(k2.at({j}) == 2 * static_cast<std::int64_t>(S.size()));
        CHECK(k3.at({j}) == 6 * G0.induced(S).edge_count());
    }

    for (std::uint64_t s = 0; s < 20; ++s) {
        opt.uncoloured = 4 + static_cast<int>(s % 5);
        const ColourSystem cs = random_colour_system(params({1, 2}, {2, 1}), opt, s);
        const Graph H0 = sample_gnp(opt.uncoloured, p, s + 50);
        for (const char* name : {"K3", "P3", "C4"}) {
            const PatternGraph H = PatternGraph::named(name);
            const IntTable t = psi_table(H, cs, H0);
            for (std::size_t f = 0; f < t.size(); ++f) CHECK(t[f] == brute_psi(H, cs, H0, t.tuple_at(f)));
        }
    }
}

TEST_CASE("kappa")
{
    const RationalProb p(1, 2);
    FixtureOptions opt;
    opt.uncoloured = 6;
    const ColourSystem g0 = random_colour_system(params({}, {}), opt, 1);
    CHECK(kappa(PatternGraph::named("K2"), g0, sample_gnp(6, p, 1), {}, 2, 4) == 2);

    for (std::uint64_t s = 0; s < 50; ++s) {
        const ColourSystem cs = random_colour_system(params({1}, {2}), opt, s);
        Graph G0 = sample_gnp(6, p, s + 9);
        const int u = cs.uncoloured()[0], v = cs.uncoloured()[3];
        for (const char* name : {"K3", "P3", "C4"}) {
            const PatternGraph H = PatternGraph::named(name);
            Graph with = G0, without = G0;
            with.set_edge(0, 3, true);
            without.set_edge(0, 3, false);
            const IntTable a = psi_table(H, cs, with), b = psi_table(H, cs, without);
            const IntTable k = kappa_table(H, cs, G0, u, v);
            for (std::size_t f = 0; f < k.size(); ++f) CHECK(k[f] == a[f] - b[f]);
        }
        // coloured endpoint
        const int c = cs.colour_class(1)[0];
        for (int j = 1; j <= 2; ++j) {
            const auto S = shade_nbhd(cs, c, 1, j);
            int common = 0;
            for (int x : S) common += G0.has_edge(0, x);
            CHECK(kappa(PatternGraph::named("K3"), cs, G0, {j}, u, c) == 6 * common);
        }
    }
}

TEST_CASE("restricted systems and extensions")
{
    ColourSystem bad(params({1}, {1}), {1, U_}, {{0, 1, 1, 1}});
    CHECK_THROWS_AS(RestrictedColourSystem{bad}, ValidationError);
    FixtureOptions opt;
    opt.uncoloured = 12;
    opt.restricted = true;
    const auto rcs = random_restricted_system(params({1, 2}, {2, 1}), opt, 3);
    const auto none = extend_restricted(rcs, RationalProb(0, 1), 1);
    for (const auto& s : none.extension.sets) CHECK(s.empty());
    CHECK(none.system == rcs.system());
    const auto all = extend_restricted(rcs, RationalProb(1, 1), 1);
    for (const auto& s : all.extension.sets) CHECK(s == rcs.system().uncoloured());
    const auto half = extend_restricted(rcs, RationalProb(1, 2), 7);
    CHECK(half.extension == sample_extension(rcs, RationalProb(1, 2), 7));
    CHECK(extension_from_json(to_json(half.extension)) == half.extension);
    const ColourSystem lower = ignore_top_colour(rcs);
    CHECK(lower.g() == 1);
    CHECK(lower.order() == rcs.order() - 2);
}

TEST_CASE("extensions of a weakly general system are usually general")
{
    FixtureOptions opt;
    opt.uncoloured = 1000;
    opt.restricted = true;
    const RationalProb p(1, 2);
    int general = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto rcs = random_restricted_system(params({1, 1}, {1, 1}), opt, s);
        REQUIRE(essential_generality(rcs, p) != Generality::Neither);
        general += classify_generality(extend_restricted(rcs, p, s + 1000).system, p) == Generality::PGeneral;
    }
    CHECK(general >= 95);
}

TEST_CASE("dispersedness")
{
    FixtureOptions opt;
    opt.uncoloured = 60;
    opt.restricted = true;
    const RationalProb p(1, 2);
    const auto rcs = random_restricted_system(params({1}, {1}), opt, 2);
    const Graph G0 = sample_gnp(60, p, 2);
    const auto one = dispersedness_estimate(rcs, G0, PatternGraph::named("K2"), p, 0.5, 1, 4, 1);
    CHECK(one.max_frequency.estimate == 1.0);
    // psi(K2) = 2 |S_v| and |S_v| ~ Bin(60, 1/2): mode pmf C(60, 30) / 2^60
    const auto rep = dispersedness_estimate(rcs, G0, PatternGraph::named("K2"), p, 0.5, 20000, 4, 1);
    CHECK(rep.max_frequency.interval.contains(0.10258));
    CHECK(rep.attaining[0] == 60);
    CHECK(rep.dispersed);
}

TEST_CASE("decomposition")
{
    const RationalProb p(1, 2);
    FixtureOptions opt;
    opt.uncoloured = 20;
    const ColourSystem cs = random_colour_system(params({1}, {2}), opt, 1);
    const auto d = decompose(cs, sample_gnp(20, p, 1), PatternGraph::named("K3"));
    CHECK(d.W.size() == 4);
    CHECK(d.identity_holds);

    opt.uncoloured = 12;
    const ColourSystem plain = random_colour_system(params({}, {}), opt, 1);
    const Graph G0 = sample_gnp(12, p, 5);
    const auto d0 = decompose(plain, G0, PatternGraph::named("K3"));
    CHECK(d0.W.size() == 1);
    CHECK(d0.lhs[0] == count_labelled_copies(PatternGraph::named("K3"), G0));
    CHECK(d0.identity_holds);

    int verified = 0;
    for (std::uint64_t s = 0; verified < 60; ++s) {
        opt.uncoloured = 16 + static_cast<int>(s % 12);
        const auto P = s % 2 ? params({1}, {2}) : params({}, {});
        const ColourSystem c = random_colour_system(P, opt, s);
        try {
            const auto r = decompose(c, sample_gnp(opt.uncoloured, p, s), PatternGraph::named(s % 3 ? "K3" : "P3"));
            CHECK(r.identity_holds);
            ++verified;
        } catch (const ValidationError&) {
            // some pattern had no witness in this draw
        }
    }

    opt.uncoloured = 3;
    const ColourSystem sparse = random_colour_system(params({2}, {2}), opt, 1);
    CHECK_THROWS_WITH_AS(decompose(sparse, sample_gnp(3, p, 1), PatternGraph::named("K3")),
                         doctest::Contains("pattern not represented"),
                         ValidationError);
}
