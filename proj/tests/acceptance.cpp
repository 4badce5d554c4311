// One line per acceptance criterion; exit status 1 if any fails.
//   acceptance [--only 3,9] [--csv-dir DIR]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>

#include "CLI11.hpp"

#include "aclab/counting.hpp"
#include "aclab/errors.hpp"
#include "aclab/expectation.hpp"
#include "aclab/fixtures.hpp"
#include "aclab/gnp.hpp"
#include "aclab/lab.hpp"
#include "aclab/lattice.hpp"
#include "aclab/parallel.hpp"
#include "aclab/psi.hpp"
#include "aclab/rng.hpp"

using namespace aclab;
using namespace aclab::lab;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    std::string csv;
};

using Criterion = std::function<Outcome(unsigned)>;

std::string fmt(const char* f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

template <class T>
const T& cell(const Table& t, std::size_t row, const std::string& col)
{
    for (std::size_t k = 0; k < t.columns.size(); ++k)
        if (t.columns[k].name == col) return std::get<T>(t.rows.at(row)[k]);
    throw std::logic_error("no column " + col);
}

ResultRecord run(const json& j, unsigned workers)
{
    return run_experiment(config_from_json(j), workers);
}

// ---- 1: counting vs injections -------------------------------------------

std::int64_t injections(const PatternGraph& H, const Graph& G)
{
    const int h = H.h(), n = G.n();
    std::vector<int> img(static_cast<std::size_t>(h));
    std::int64_t count = 0;
    auto rec = [&](auto&& self, int x) -> void {
        if (x == h) {
            for (const auto& [a, b] : H.edges())
                if (!G.has_edge(img[a], img[b])) return;
            ++count;
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

Outcome counting_oracle(unsigned workers)
{
    std::vector<PatternGraph> patterns;
    for (int h = 1; h <= 4; ++h) {
        std::vector<Edge> pairs;
        for (int a = 0; a < h; ++a)
            for (int b = a + 1; b < h; ++b) pairs.emplace_back(a, b);
        for (std::uint32_t m = 0; m < (1u << pairs.size()); ++m) {
            std::vector<Edge> es;
            for (std::size_t k = 0; k < pairs.size(); ++k)
                if ((m >> k) & 1u) es.push_back(pairs[k]);
            patterns.emplace_back(h, es);
        }
    }
    const std::uint64_t graphs = 100;
    std::vector<int> mismatches(graphs, 0), orders(graphs, 0);
    for_each_trial(graphs, workers, [&](std::uint64_t i) {
        const int n = 1 + static_cast<int>(i % 8);
        const Graph G = sample_gnp(n, RationalProb(1, 2), derive_seed(1, "acceptance-graph", i));
        orders[i] = n;
        for (const auto& H : patterns) mismatches[i] += count_labelled_copies(H, G) != injections(H, G);
    });
    Table t;
    t.columns = {{"graph", CellType::Int}, {"n", CellType::Int}, {"patterns", CellType::Int}, {"mismatches", CellType::Int}};
    int total = 0;
    for (std::size_t i = 0; i < graphs; ++i) {
        t.add({static_cast<std::int64_t>(i), std::int64_t{orders[i]}, static_cast<std::int64_t>(patterns.size()),
               std::int64_t{mismatches[i]}});
        total += mismatches[i];
    }
    return {total == 0,
            std::to_string(graphs) + " graphs x " + std::to_string(patterns.size()) + " patterns, " +
                std::to_string(total) + " mismatches",
            to_csv(t)};
}

// ---- 2: exact distribution --------------------------------------------------

Outcome exact_distribution_fixture(unsigned workers)
{
    Table t;
    t.columns = {{"n", CellType::Int},   {"total", CellType::Exact},          {"mean", CellType::Exact},
                 {"expected", CellType::Exact}, {"max_point", CellType::Exact}};
    bool ok = true;
    std::string detail;
    Rational prev = 2;
    for (int n = 3; n <= 7; ++n) {
        const auto rec = run({{"kind", "distribution"}, {"params", {{"H", "K3"}, {"n", n}, {"p", "1/2"}}}}, workers);
        std::map<std::int64_t, Rational> support;
        Rational total = 0, mean = 0, top = 0;
        for (std::size_t r = 0; r < rec.summary.rows.size(); ++r) {
            const auto x = cell<std::int64_t>(rec.summary, r, "value");
            const auto& q = cell<Rational>(rec.summary, r, "probability");
            support[x] = q;
            total += q;
            mean += q * Rational(static_cast<long>(x));
            top = std::max(top, q);
        }
        Rational expected(n * (n - 1) * (n - 2), 8);   // n(n-1)(n-2) / 2^3
        expected.canonicalize();
        if (n == 3) {
            const bool fixture = support == std::map<std::int64_t, Rational>{{0, Rational(7, 8)}, {6, Rational(1, 8)}};
            ok = ok && fixture;
            if (!fixture) detail += "n=3 support differs; ";
        } else {
            ok = ok && total == 1 && mean == expected && top < prev;
            if (total != 1 || mean != expected) detail += "n=" + std::to_string(n) + " sum/mean off; ";
            if (!(top < prev)) detail += "max point not decreasing at n=" + std::to_string(n) + "; ";
        }
        prev = top;
        t.add({std::int64_t{n}, total, mean, expected, top});
    }
    return {ok, detail.empty() ? "{0: 7/8, 6: 1/8} at n=3; n=4..7 sum 1, mean exact, max point decreasing" : detail,
            to_csv(t)};
}

// ---- 3: point probability scaling --------------------------------------------

Outcome point_probability_scaling(unsigned workers)
{
    const auto rec = run({{"kind", "pointprob"}, {"seed", 1}, {"trials", 1'000'000},
                          {"params", {{"H", "K3"}, {"n", {10, 20, 40}}, {"p", "1/2"}}}},
                         workers);
    const auto& t = rec.summary;
    bool ok = true;
    std::string detail = "ratios";
    for (std::size_t r = 1; r < t.rows.size(); ++r) {
        const double ratio = cell<double>(t, r, "probability") / cell<double>(t, r - 1, "probability");
        ok = ok && ratio >= 0.15 && ratio <= 0.45;
        detail += " " + fmt("%.4f", ratio);
    }
    return {ok && t.rows.size() == 3, detail + " (window [0.15, 0.45])", to_csv(t)};
}

// ---- 4, 5: span and certificates ----------------------------------------------

const json kSpanConfig = {{"kind", "span-check"},
                          {"seed", 1},
                          {"params", {{"g_max", 2}, {"a_max", 2}, {"t_max", 3}, {"patterns", {"K3", "P3", "C4", "C5"}}}}};

Outcome span_rank_full(unsigned workers)
{
    const auto rec = run(kSpanConfig, workers);
    const auto& t = rec.summary;
    std::size_t good = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        good += cell<std::int64_t>(t, r, "rank") == cell<std::int64_t>(t, r, "T") && cell<bool>(t, r, "spans");
    Table out = t;   // rank columns only
    for (auto& row : out.rows) row.resize(7);
    out.columns.resize(7);
    return {good == t.rows.size() && !t.rows.empty(),
            std::to_string(good) + "/" + std::to_string(t.rows.size()) + " (fixture, H) pairs with rank = T", to_csv(out)};
}

Outcome span_certificates(unsigned workers)
{
    const auto rec = run(kSpanConfig, workers);
    const auto& t = rec.summary;
    std::int64_t trees = 0, exact = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        trees += cell<std::int64_t>(t, r, "trees");
        exact += cell<std::int64_t>(t, r, "certificates_exact");
    }
    return {trees > 0 && trees == exact,
            std::to_string(exact) + "/" + std::to_string(trees) + " certificates evaluate to gamma exactly", to_csv(t)};
}

// ---- 6: decomposition ------------------------------------------------------------

Outcome decomposition_identity(unsigned workers)
{
    const auto rec = run({{"kind", "decompose"},
                          {"seed", 1},
                          {"params", {{"fixtures", 100}, {"patterns", {"K3", "P3"}}, {"n_min", 16}, {"n_max", 30}}}},
                         workers);
    const auto& t = rec.summary;
    std::size_t holds = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) holds += cell<bool>(t, r, "holds");
    return {holds == 100 && t.rows.size() == 100, std::to_string(holds) + "/100 fixtures verified exactly", to_csv(t)};
}

// ---- 7: exact mu / nu -----------------------------------------------------------

template <class F>
RationalTable g0_mean(int nU, const RationalProb& p, const std::vector<int>& shape, F f)
{
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < nU; ++a)
        for (int b = a + 1; b < nU; ++b) pairs.emplace_back(a, b);
    RationalTable out(shape, Rational(0));
    for (std::uint32_t m = 0; m < (1u << pairs.size()); ++m) {
        Graph G0(nU);
        unsigned e = 0;
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if ((m >> k) & 1u) {
                G0.add_edge(pairs[k].first, pairs[k].second);
                ++e;
            }
        const Rational w = rational_pow(p.value(), e) * rational_pow(p.complement(), static_cast<unsigned>(pairs.size()) - e);
        const IntTable v = f(G0);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * Rational(static_cast<long>(v[k]));
    }
    return out;
}

Outcome mu_nu_oracle(unsigned workers)
{
    struct Case {
        std::vector<int> a, t;
        int nU;
        std::uint64_t seed;
    };
    std::vector<Case> cases;
    const std::vector<std::pair<std::vector<int>, std::vector<int>>> shapes{
        {{1}, {1}}, {{2}, {1}}, {{1, 1}, {2, 1}}, {{2, 1}, {1, 1}}, {{1, 2}, {2, 1}}};
    for (const auto& [a, t] : shapes)
        for (int nU = 1; nU <= 5; ++nU)
            for (std::uint64_t s = 0; s < 2; ++s) cases.push_back({a, t, nU, s});
    const std::vector<std::string> names{"K2", "K3", "P3", "C4"};
    const RationalProb p(2, 5);
    std::vector<int> mu_ok(cases.size()), nu_ok(cases.size()), diff_ok(cases.size());
    for_each_trial(cases.size(), workers, [&](std::uint64_t i) {
        const auto& c = cases[i];
        ColourParams cp{static_cast<int>(c.a.size()), c.a, c.t};
        FixtureOptions opt;
        opt.uncoloured = c.nU;
        opt.p = p;
        opt.restricted = true;
        const auto rcs = random_restricted_system(cp, opt, derive_seed(c.seed, "acceptance-fixture", i));
        const Extension S = sample_extension(rcs, p, derive_seed(c.seed, "acceptance-extension", i));
        const ColourSystem sys = apply_extension(rcs, S);
        const auto shape = sys.params().shape();
        const int u = sys.uncoloured().front();
        const int v = rcs.top_vertices().back();
        const std::size_t slot = rcs.top_vertices().size() - 1;
        auto toggled = [&](bool member) {
            Extension T = S;
            auto& set = T.sets[slot];
            std::erase(set, u);
            if (member) {
                set.push_back(u);
                std::sort(set.begin(), set.end());
            }
            return T;
        };
        for (const auto& name : names) {
            const auto H = PatternGraph::named(name);
            mu_ok[i] += exact_mu(rcs, S, H, p) ==
                        g0_mean(c.nU, p, shape, [&](const Graph& G0) { return psi_table(H, sys, G0); });
            const RationalTable nu = exact_nu(rcs, S, H, p, u, v);
            nu_ok[i] += nu == g0_mean(c.nU, p, shape, [&](const Graph& G0) { return kappa_table(H, sys, G0, u, v); });
            const RationalTable in = exact_mu(rcs, toggled(true), H, p), out = exact_mu(rcs, toggled(false), H, p);
            bool same = true;
            for (std::size_t f = 0; f < nu.size(); ++f) same = same && nu[f] == in[f] - out[f];
            diff_ok[i] += same;
        }
    });
    Table t;
    t.columns = {{"fixture", CellType::Int}, {"a", CellType::Text},     {"U", CellType::Int},
                 {"mu_exact", CellType::Int}, {"nu_exact", CellType::Int}, {"nu_difference", CellType::Int}};
    std::size_t good = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        std::string a;
        for (int x : cases[i].a) a += (a.empty() ? "" : ",") + std::to_string(x);
        t.add({static_cast<std::int64_t>(i), a, std::int64_t{cases[i].nU}, std::int64_t{mu_ok[i]}, std::int64_t{nu_ok[i]},
               std::int64_t{diff_ok[i]}});
        const int want = static_cast<int>(names.size());
        good += mu_ok[i] == want && nu_ok[i] == want && diff_ok[i] == want;
    }
    return {good == cases.size(),
            std::to_string(good) + "/" + std::to_string(cases.size()) + " fixtures (|U| <= 5, 4 patterns each) exact",
            to_csv(t)};
}

// ---- 8: nu against n Gamma --------------------------------------------------------

Outcome nu_gamma_consistency(unsigned workers)
{
    const auto rec = run({{"kind", "nu-gamma"},
                          {"seed", 1},
                          {"params", {{"a", {1}}, {"t", {1}}, {"sizes", {100, 200, 400}}, {"fixtures", 20}, {"H", "K3"}}}},
                         workers);
    const auto& t = rec.summary;
    std::map<std::int64_t, double> worst;
    std::int64_t warnings = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto n = cell<std::int64_t>(t, r, "n");
        worst[n] = std::max(worst[n], cell<double>(t, r, "ratio"));
        warnings += cell<std::int64_t>(t, r, "warnings");
    }
    const double C = worst[100];
    const bool ok = C > 0 && worst[200] <= 2 * C && worst[400] <= 2 * C && warnings == 0;
    return {ok,
            "C = " + fmt("%.4f", C) + " at n=100; max ratio " + fmt("%.4f", worst[200]) + " at 200, " +
                fmt("%.4f", worst[400]) + " at 400 (limit 2C); " + std::to_string(warnings) + " warnings",
            to_csv(t)};
}

// ---- 9: Halasz probe ------------------------------------------------------------------

Outcome halasz_probe(unsigned workers)
{
    const auto rec = run({{"kind", "halasz"},
                          {"seed", 1},
                          {"trials", 100'000},
                          {"params", {{"sizes", {100, 400, 1600}}, {"d", 2}, {"factor", 3}}}},
                         workers);
    const auto& t = rec.summary;
    bool inside = true, bounded = !t.rows.empty();
    std::string cs;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        inside = inside && cell<bool>(t, r, "exact_in_interval");
        bounded = bounded && cell<bool>(t, r, "bounded");
        cs += " " + fmt("%.3f", cell<double>(t, r, "fitted_c"));
    }
    return {inside && bounded,
            "c =" + cs + (bounded ? " within factor 3" : " NOT within factor 3") +
                (inside ? "; exact oracle inside every interval" : "; exact oracle outside an interval"),
            to_csv(t)};
}

// ---- 10: lattice ---------------------------------------------------------------------

// Exact inverse by Gauss-Jordan; empty when singular.
std::vector<std::vector<Rational>> inverse(std::vector<std::vector<Rational>> M)
{
    const std::size_t d = M.size();
    std::vector<std::vector<Rational>> I(d, std::vector<Rational>(d, Rational(0)));
    for (std::size_t i = 0; i < d; ++i) I[i][i] = 1;
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t piv = c;
        while (piv < d && M[piv][c] == 0) ++piv;
        if (piv == d) return {};
        std::swap(M[piv], M[c]);
        std::swap(I[piv], I[c]);
        const Rational inv = 1 / M[c][c];
        for (std::size_t k = 0; k < d; ++k) {
            M[c][k] *= inv;
            I[c][k] *= inv;
        }
        for (std::size_t r = 0; r < d; ++r)
            if (r != c && M[r][c] != 0) {
                const Rational f = M[r][c];
                for (std::size_t k = 0; k < d; ++k) {
                    M[r][k] -= f * M[c][k];
                    I[r][k] -= f * I[c][k];
                }
            }
    }
    return I;
}

Outcome lattice_oracle(unsigned workers)
{
    struct Case {
        std::vector<std::vector<Rational>> basis;
        std::vector<Rational> x;
        Rational z;
        std::vector<long> bound;
    };
    std::vector<Case> cases;
    Engine rng(derive_seed(1, "acceptance-lattice", 0));
    std::uniform_int_distribution<int> num(-6, 6), den(1, 3), zz(2, 20), dim(1, 3);
    while (cases.size() < 50) {
        Case c;
        const int d = dim(rng);
        c.basis.assign(static_cast<std::size_t>(d), {});
        for (auto& v : c.basis)
            for (int k = 0; k < d; ++k) {
                v.emplace_back(num(rng), den(rng));
                v.back().canonicalize();
            }
        for (int k = 0; k < d; ++k) {
            c.x.emplace_back(num(rng), den(rng));
            c.x.back().canonicalize();
        }
        c.z = Rational(zz(rng), 2);
        c.z.canonicalize();
        const auto inv = inverse(c.basis);
        if (inv.empty()) continue;
        // t = y B^{-1} with |y_k| < |x_k| + z
        double points = 1;
        for (int i = 0; i < d; ++i) {
            Rational b = 0;
            for (int k = 0; k < d; ++k) b += abs(inv[k][i]) * (abs(c.x[k]) + c.z);
            c.bound.push_back(static_cast<long>(std::floor(b.get_d())) + 1);
            points *= 2.0 * static_cast<double>(c.bound.back()) + 1;
        }
        if (points > 2e6) continue;
        cases.push_back(std::move(c));
    }
    std::vector<std::uint64_t> got(cases.size()), want(cases.size());
    for_each_trial(cases.size(), workers, [&](std::uint64_t i) {
        const auto& c = cases[i];
        const std::size_t d = c.basis.size();
        got[i] = lattice_count(c.basis, c.x, c.z).count;
        std::vector<long> t(d);
        for (std::size_t k = 0; k < d; ++k) t[k] = -c.bound[k];
        std::uint64_t count = 0;
        while (true) {
            bool in = true;
            for (std::size_t k = 0; k < d && in; ++k) {
                Rational s = -c.x[k];
                for (std::size_t j = 0; j < d; ++j) s += Rational(t[j]) * c.basis[j][k];
                in = abs(s) < c.z;
            }
            count += in;
            std::size_t j = 0;
            while (j < d && t[j] == c.bound[j]) {
                t[j] = -c.bound[j];
                ++j;
            }
            if (j == d) break;
            ++t[j];
        }
        want[i] = count;
    });
    Table t;
    t.columns = {{"basis", CellType::Int}, {"d", CellType::Int}, {"z", CellType::Exact}, {"count", CellType::Int},
                 {"brute", CellType::Int}};
    std::size_t good = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        t.add({static_cast<std::int64_t>(i), static_cast<std::int64_t>(cases[i].basis.size()), cases[i].z,
               static_cast<std::int64_t>(got[i]), static_cast<std::int64_t>(want[i])});
        good += got[i] == want[i];
    }
    return {good == cases.size(), std::to_string(good) + "/50 random bases agree with enumeration", to_csv(t)};
}

// ---- 11: concentration -------------------------------------------------------------

Outcome concentration(unsigned workers)
{
    const auto rec = run({{"kind", "concentration"},
                          {"seed", 1},
                          {"trials", 1000},
                          {"params", {{"a", {1}}, {"t", {1}}, {"sizes", {200}}, {"H", "K3"}}}},
                         workers);
    const auto& t = rec.summary;
    bool ok = t.rows.size() == 2;
    std::string detail;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double f = cell<double>(t, r, "frequency");
        ok = ok && f <= 0.01;
        detail += cell<std::string>(t, r, "scale") + " " + fmt("%.4f", f) + " (max ratio " +
                  fmt("%.3f", cell<double>(t, r, "max_ratio")) + "); ";
    }
    return {ok, detail + "limit 0.01", to_csv(t)};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance suite"};
    std::vector<int> only;
    std::string csv_dir;
    app.add_option("--only", only, "criteria to run (12 reruns whichever of 1..11 ran)")->delimiter(',');
    app.add_option("--csv-dir", csv_dir, "write criterion-N.csv files here");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{counting_oracle,       exact_distribution_fixture, point_probability_scaling,
                                          span_rank_full,            span_certificates,          decomposition_identity,
                                          mu_nu_oracle,          nu_gamma_consistency,       halasz_probe,
                                          lattice_oracle,        concentration};
    const std::set<int> wanted(only.begin(), only.end());
    auto selected = [&](int k) { return wanted.empty() || wanted.count(k); };
    if (!csv_dir.empty()) std::filesystem::create_directories(csv_dir);

    bool all = true;
    std::map<int, std::string> reference;
    auto report = [&](int k, bool pass, const std::string& detail, double secs) {
        all = all && pass;
        std::cout << "criterion " << k << ": " << (pass ? "PASS" : "FAIL") << "  " << detail << "  [" << fmt("%.1f", secs)
                  << " s]" << std::endl;
    };
    for (int k = 1; k <= 11; ++k) {
        if (!selected(k)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        set_default_workers(1);
        try {
            o = criteria[static_cast<std::size_t>(k - 1)](1);
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what(), ""};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        reference[k] = o.csv;
        if (!csv_dir.empty()) std::ofstream(csv_dir + "/criterion-" + std::to_string(k) + ".csv") << o.csv;
        report(k, o.pass, o.detail, secs);
    }
    if (selected(12)) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool same = !reference.empty();
        for (const auto& [k, csv] : reference)
            for (unsigned w : {4u, 8u}) {
                set_default_workers(w);
                std::string again;
                try {
                    again = criteria[static_cast<std::size_t>(k - 1)](w).csv;
                } catch (const std::exception& e) {
                    again = std::string("threw: ") + e.what();
                }
                if (again != csv || csv.empty()) {
                    same = false;
                    detail += "criterion " + std::to_string(k) + " differs at " + std::to_string(w) + " workers; ";
                }
            }
        set_default_workers(0);
        if (reference.empty()) detail = "nothing to rerun; select at least one of 1..11";
        else if (same) detail = std::to_string(reference.size()) + " criteria byte-identical at 1, 4 and 8 workers";
        report(12, same, detail, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    return all ? 0 : 1;
}
