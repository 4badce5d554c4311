#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <map>
#include <set>

#include "aclab/core.hpp"
#include "aclab/counting.hpp"
#include "aclab/cube.hpp"
#include "aclab/decompose.hpp"
#include "aclab/errors.hpp"
#include "aclab/expectation.hpp"
#include "aclab/extension.hpp"
#include "aclab/fixtures.hpp"
#include "aclab/gamma.hpp"
#include "aclab/gnp.hpp"
#include "aclab/lab.hpp"
#include "aclab/parallel.hpp"
#include "aclab/probes.hpp"
#include "aclab/rng.hpp"
#include "aclab/span.hpp"
#include "aclab/structure.hpp"

namespace aclab::lab {

using nlohmann::json;

const std::vector<std::string>& experiment_kinds()
{
    static const std::vector<std::string> kinds{"distribution",  "pointprob",        "span-check", "gamma",
                                                "decompose",     "dispersedness",    "general-position",
                                                "halasz",        "nu-gamma",         "kappa-gamma",
                                                "scale-probe",   "concentration"};
    return kinds;
}

namespace {

// Reads kind parameters, remembers which keys were consumed, and rejects the rest.
class Params {
public:
    Params(const json& j, std::string kind) : j_(j), kind_(std::move(kind)) {}

    bool has(const std::string& key) const { return j_.contains(key); }

    template <class T>
    T get(const std::string& key, T fallback)
    {
        used_.insert(key);
        if (!j_.contains(key)) return fallback;
        return convert<T>(key);
    }

    template <class T>
    T require(const std::string& key)
    {
        used_.insert(key);
        if (!j_.contains(key)) fail(key, "is required");
        return convert<T>(key);
    }

    RationalProb prob(const std::string& key, const char* fallback = "1/2")
    {
        used_.insert(key);
        if (!j_.contains(key)) return RationalProb::parse(fallback);
        const json& v = j_.at(key);
        if (v.is_string()) return RationalProb::parse(v.get<std::string>());
        if (v.is_number_integer()) return RationalProb(v.get<std::int64_t>(), 1);
        fail(key, "must be a rational string such as \"1/2\"");
    }

    Rational rational(const std::string& key)
    {
        used_.insert(key);
        const json& v = j_.at(key);
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(static_cast<long>(v.get<std::int64_t>()));
        fail(key, "must be an integer or a rational string");
    }

    PatternGraph pattern(const std::string& key, const char* fallback = "K3")
    {
        used_.insert(key);
        if (!j_.contains(key)) return PatternGraph::named(fallback);
        return parse_pattern(key, j_.at(key));
    }

    std::vector<PatternGraph> patterns(const std::string& key, std::vector<std::string> fallback)
    {
        used_.insert(key);
        std::vector<PatternGraph> out;
        if (!j_.contains(key)) {
            for (const auto& s : fallback) out.push_back(PatternGraph::named(s));
            return out;
        }
        const json& v = j_.at(key);
        if (!v.is_array()) return {parse_pattern(key, v)};
        for (const auto& x : v) out.push_back(parse_pattern(key, x));
        if (out.empty()) fail(key, "must not be empty");
        return out;
    }

    // A single integer or a list of them.
    std::vector<int> ints(const std::string& key, std::vector<int> fallback)
    {
        used_.insert(key);
        if (!j_.contains(key)) return fallback;
        const json& v = j_.at(key);
        try {
            if (v.is_array()) return v.get<std::vector<int>>();
            return {v.get<int>()};
        } catch (const json::exception&) {
            fail(key, "must be an integer or a list of integers");
        }
    }

    void finish() const
    {
        for (const auto& [key, value] : j_.items())
            if (!used_.count(key)) throw ValidationError(kind_ + ": unknown parameter '" + key + "'");
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const
    {
        throw ValidationError(kind_ + ": parameter '" + key + "' " + what);
    }

private:
    template <class T>
    T convert(const std::string& key)
    {
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception&) {
            fail(key, "has the wrong type");
        }
    }

    PatternGraph parse_pattern(const std::string& key, const json& v)
    {
        try {
            if (v.is_string()) return PatternGraph::named(v.get<std::string>());
            return pattern_from_json(v);
        } catch (const json::exception&) {
            fail(key, "is not a pattern graph");
        }
    }

    const json& j_;
    std::string kind_;
    std::set<std::string> used_;
};

struct Plan {
    std::vector<Column> columns;
    std::function<void(ResultRecord&, unsigned)> run;
};

using Builder = Plan (*)(const ExperimentConfig&);

std::string join(const std::vector<int>& xs)
{
    std::string out;
    for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? "," : "") + std::to_string(xs[k]);
    return out;
}

std::string pattern_label(const PatternGraph& H)
{
    return H.name().empty() ? to_json(H).dump() : H.name();
}

ColourParams colour_params(Params& P, const std::vector<int>& a_fallback, const std::vector<int>& t_fallback)
{
    ColourParams cp;
    cp.a = P.get<std::vector<int>>("a", a_fallback);
    cp.t = P.get<std::vector<int>>("t", t_fallback);
    cp.g = static_cast<int>(cp.a.size());
    cp.check();
    return cp;
}

int coloured_count(const ColourParams& cp)
{
    int s = 0;
    for (int x : cp.a) s += x;
    return s;
}

void require_restricted(const ColourParams& cp, const std::string& kind)
{
    if (cp.g < 1 || cp.t.back() != 1) throw ValidationError(kind + ": needs g >= 1 and t_g = 1");
}

// Orders n with n - (a_1 + ... + a_g) uncoloured vertices.
std::vector<int> checked_orders(const std::vector<int>& ns, const ColourParams& cp, const std::string& kind, int min_u = 1)
{
    if (ns.empty()) throw ValidationError(kind + ": needs at least one order n");
    for (int n : ns)
        if (n - coloured_count(cp) < min_u)
            throw ValidationError(kind + ": order " + std::to_string(n) + " leaves fewer than " + std::to_string(min_u) +
                                  " uncoloured vertices");
    return ns;
}

void require_trials(const ExperimentConfig& cfg)
{
    if (cfg.trials < 1) throw ValidationError(cfg.kind + ": trials must be at least 1");
}

void require_h(const PatternGraph& H, int g, const std::string& kind)
{
    if (H.h() < g + 1) throw ValidationError(kind + ": pattern needs h >= g + 1");
}

RestrictedColourSystem restricted_fixture(const ColourParams& cp, int order, const RationalProb& p, std::uint64_t seed)
{
    FixtureOptions opt;
    opt.uncoloured = order - coloured_count(cp);
    opt.p = p;
    opt.restricted = true;
    return random_restricted_system(cp, opt, seed);
}

ColourSystem plain_fixture(const ColourParams& cp, int order, const RationalProb& p, std::uint64_t seed)
{
    FixtureOptions opt;
    opt.uncoloured = order - coloured_count(cp);
    opt.p = p;
    return random_colour_system(cp, opt, seed);
}

json estimate_json(const EstimationResult& e)
{
    return to_json(e);
}

// ---------------------------------------------------------------------------

Plan plan_distribution(const ExperimentConfig& cfg)
{
    Params P(cfg.params, cfg.kind);
    const PatternGraph H = P.pattern("H");
    const int n = P.require<int>("n");
    const RationalProb p = P.prob("p");
    const int max_pairs = P.get<int>("max_pairs", kDefaultExhaustivePairs);
    P.finish();
    if (n < 1) throw ValidationError("distribution: n must be positive");
    if (static_cast<std::int64_t>(n) * (n - 1) / 2 > max_pairs)
        throw CapacityError("distribution: 2^" + std::to_string(n * (n - 1) / 2) + " graphs exceed the cutoff 2^" +
                            std::to_string(max_pairs));
    return {{{"value", CellType::Int}, {"probability", CellType::Exact}}, [=](ResultRecord& r, unsigned) {
                const auto d = exact_distribution(H, n, p, max_pairs);
                for (const auto& [x, q] : d.support) r.summary.add({x, q});
                r.runs.push_back({{"n", n},
                                  {"H", to_json(H)},
                                  {"total", to_string(d.total())},
                                  {"mean", to_string(d.mean())},
                                  {"expected_count", to_string(expected_count(H, n, p))},
                                  {"max_point_probability", to_string(d.max_point_probability())}});
            }};
}

Plan plan_pointprob(const ExperimentConfig& cfg)
{
    Params P(cfg.params, cfg.kind);
    const PatternGraph H = P.pattern("H");
    const std::vector<int> ns = P.ints("n", {10, 20, 40});
    const RationalProb p = P.prob("p");
    P.finish();
    require_trials(cfg);
    for (int n : ns) {
        if (n < 1) throw ValidationError("pointprob: n must be positive");
        check_count_capacity(H, n);
    }
    return {{{"n", CellType::Int},
             {"mode", CellType::Int},
             {"probability", CellType::Real},
             {"low", CellType::Real},
             {"high", CellType::Real},
             {"successes", CellType::Int},
             {"trials", CellType::Int}},
            [=](ResultRecord& r, unsigned workers) {
                for (int n : ns) {
                    const std::uint64_t seed = derive_seed(r.config.seed, "pointprob", static_cast<std::uint64_t>(n));
                    r.seeds.emplace_back("pointprob n=" + std::to_string(n), seed);
                    const auto est = point_prob_estimate(H, n, p, r.config.trials, seed, workers);
                    const auto& e = est.result;
                    r.summary.add({std::int64_t{n}, est.mode, e.estimate, e.interval.low, e.interval.high,
                                   static_cast<std::int64_t>(e.successes), static_cast<std::int64_t>(e.trials)});
                    json hist = json::array();
                    for (const auto& [x, c] : est.histogram) hist.push_back({x, c});
                    r.runs.push_back({{"n", n}, {"mode", est.mode}, {"estimate", estimate_json(e)}, {"histogram", hist}});
                }
            }};
}

struct CoreSpec {
    std::vector<int> a;
    std::vector<int> t;   // t_g = 1
};

std::vector<CoreSpec> complete_core_family(int g_max, int a_max, int t_max)
{
    std::vector<CoreSpec> out;
    for (int a1 = 1; a1 <= a_max; ++a1) out.push_back({{a1}, {1}});
    if (g_max >= 2)
        for (int a1 = 1; a1 <= a_max; ++a1)
            for (int t1 = 1; t1 <= t_max; ++t1) out.push_back({{a1, 1 << (a1 * t1)}, {t1, 1}});
    return out;
}

Core complete_core(const CoreSpec& spec, const RationalProb& p, std::uint64_t seed)
{
    ColourParams cp{static_cast<int>(spec.a.size()), spec.a, spec.t};
    FixtureOptions opt;
    opt.p = p;
    opt.complete = true;
    return core_of_restricted(random_restricted_system(cp, opt, seed));
}

Plan plan_span_check(const ExperimentConfig& cfg)
{
    Params P(cfg.params, cfg.kind);
    std::vector<CoreSpec> specs;
    if (P.has("fixtures")) {
        const json fx = P.require<json>("fixtures");
        if (!fx.is_array() || fx.empty()) P.fail("fixtures", "must be a non-empty list of {a, t}");
        for (const auto& f : fx) {
            CoreSpec s;
            try {
                s.a = f.at("a").get<std::vector<int>>();
                s.t = f.at("t").get<std::vector<int>>();
            } catch (const json::exception&) {
                P.fail("fixtures", "entries need integer lists a and t");
            }
            specs.push_back(std::move(s));
        }
    } else {
        const int g_max = P.get<int>("g_max", 2);
        const int a_max = P.get<int>("a_max", 2);
        const int t_max = P.get<int>("t_max", 3);
        if (g_max < 1 || g_max > 2) P.fail("g_max", "must be 1 or 2");
        if (a_max < 1 || t_max < 1 || a_max * t_max > 16) P.fail("a_max", "and t_max must be positive with a_max t_max <= 16");
        specs = complete_core_family(g_max, a_max, t_max);
    }
    const auto patterns = P.patterns("patterns", {"K3", "P3", "C4", "C5"});
    const RationalProb p = P.prob("p");
    const bool certificates = P.get<bool>("certificates", true);
    P.finish();
    for (const auto& s : specs) {
        ColourParams cp{static_cast<int>(s.a.size()), s.a, s.t};
        cp.check();
        require_restricted(cp, "span-check");
        std::uint64_t need = 1;
        for (int i = 0; i + 1 < cp.g; ++i) need <<= s.a[static_cast<std::size_t>(i)] * s.t[static_cast<std::size_t>(i)];
        if (cp.g >= 2 && s.a.back() < static_cast<int>(std::min<std::uint64_t>(need, 1u << 20)))
            throw ValidationError("span-check: complete fixtures need a_g >= 2^(a_1 t_1 + ... )");
    }

    return {{{"g", CellType::Int},
             {"a", CellType::Text},
             {"t", CellType::Text},
             {"H", CellType::Text},
             {"T", CellType::Int},
             {"rank", CellType::Int},
             {"spans", CellType::Flag},
             {"trees", CellType::Int},
             {"certificates_exact", CellType::Int},
             {"max_depth", CellType::Int}},
            [=](ResultRecord& r, unsigned workers) {
                for (std::size_t i = 0; i < specs.size(); ++i) {
                    const std::uint64_t seed = derive_seed(r.config.seed, "fixture", i);
                    r.seeds.emplace_back("fixture " + std::to_string(i), seed);
                    const Core core = complete_core(specs[i], p, seed);
                    for (const auto& H : patterns) {
                        if (H.h() < core.g() + 1) continue;
                        const SpanRank sr = span_rank(core, H, p);
                        std::vector<DownwardTree> trees;
                        if (certificates)
                            for (int b = 1; b <= core.g(); ++b)
                                for (auto& t : enumerate_downward_trees(core, b)) trees.push_back(std::move(t));
                        std::vector<std::uint8_t> exact(trees.size(), 0);
                        std::vector<int> depth(trees.size(), 0);
                        for_each_trial(trees.size(), resolve_workers(workers), [&](std::uint64_t k) {
                            const auto cert = express_tree_gamma(core, H, trees[k], p);
                            const RationalTable direct = gamma(core, H, trees[k].edges, p);
                            exact[k] = cert.value == direct && evaluate_certificate(cert, core, H, p) == direct;
                            depth[k] = cert.depth;
                        });
                        std::int64_t ok = 0;
                        int max_depth = 0;
                        for (std::size_t k = 0; k < trees.size(); ++k) {
                            ok += exact[k];
                            max_depth = std::max(max_depth, depth[k]);
                        }
                        r.summary.add({std::int64_t{core.g()}, join(specs[i].a), join(specs[i].t), pattern_label(H),
                                       static_cast<std::int64_t>(sr.T), std::int64_t{sr.rank}, sr.spans(),
                                       static_cast<std::int64_t>(trees.size()), ok, std::int64_t{max_depth}});
                        r.runs.push_back({{"fixture", i}, {"H", to_json(H)}, {"basis", sr.basis}});
                    }
                }
            }};
}

Plan plan_gamma(const ExperimentConfig& cfg)
{
    Params P(cfg.params, cfg.kind);
    const ColourParams cp = colour_params(P, {1, 2}, {1, 1});
    require_restricted(cp, "gamma");
    const bool complete = P.get<bool>("complete", true);
    const int uncoloured = P.get<int>("uncoloured", 0);
    const PatternGraph H = P.pattern("H");
    const RationalProb p = P.prob("p");
    std::vector<std::vector<int>> required;
    if (P.has("required")) required = P.require<std::vector<std::vector<int>>>("required");
    P.finish();
    if (uncoloured < 0) throw ValidationError("gamma: uncoloured must be nonnegative");
    return {{{"required", CellType::Text}, {"shades", CellType::Text}, {"value", CellType::Exact}},
            [=](ResultRecord& r, unsigned) {
                const std::uint64_t seed = derive_seed(r.config.seed, "fixture", 0);
                r.seeds.emplace_back("fixture", seed);
                FixtureOptions opt;
                opt.p = p;
                opt.complete = complete;
                opt.uncoloured = uncoloured;
                opt.restricted = true;
                const Core core = core_of_restricted(random_restricted_system(cp, opt, seed));
                std::vector<std::vector<int>> sets = required;
                if (sets.empty())
                    for (int e : core.top_edges()) sets.push_back({e});
                for (const auto& F : sets) {
                    for (int e : F)
                        if (e < 0 || e >= static_cast<int>(core.edges().size()))
                            throw ValidationError("gamma: required edge index out of range");
                    const RationalTable G = gamma(core, H, F, p);
                    for (std::size_t f = 0; f < G.size(); ++f) r.summary.add({join(F), join(G.tuple_at(f)), G[f]});
                }
                r.runs.push_back({{"core", to_json(core.system())}});
            }};
}

Plan plan_decompose(const ExperimentConfig& cfg)
{
    Params P(cfg.params, cfg.kind);
    const int fixtures = P.get<int>("fixtures", 100);
    std::vector<ColourParams> lowers;
    const json lj = P.get<json>("lower", json::array({json{{"a", json::array()}, {"t", json::array()}},
                                                      json{{"a", {1}}, {"t", {2}}}}));
    try {
        for (const auto& x : lj) {
            ColourParams cp;
            cp.a = x.at("a").get<std::vector<int>>();
            cp.t = x.at("t").get<std::vector<int>>();
            cp.g = static_cast<int>(cp.a.size());
            cp.check();
            lowers.push_back(cp);
        }
    } catch (const json::exception&) {
        P.fail("lower", "must be a list of {a, t}");
    }
    const auto patterns = P.patterns("patterns", {"K3", "P3"});
    const int n_min = P.get<int>("n_min", 16), n_max = P.get<int>("n_max", 30);
    const RationalProb p = P.prob("p");
    const int max_attempts = P.get<int>("max_attempts", 50);
    P.finish();
    if (fixtures < 0 || lowers.empty() || n_min > n_max || max_attempts < 1)
        throw ValidationError("decompose: need fixtures >= 0, a lower system, n_min <= n_max, max_attempts >= 1");
    for (const auto& cp : lowers) checked_orders({n_min}, cp, "decompose");
    return {{{"fixture", CellType::Int},
             {"lower_g", CellType::Int},
             {"H", CellType::Text},
             {"n", CellType::Int},
             {"W", CellType::Int},
             {"attempts", CellType::Int},
             {"holds", CellType::Flag}},
            [=](ResultRecord& r, unsigned workers) {
                struct Row {
                    int n = 0, W = 0, attempts = 0;
                    bool holds = false;
                };
                std::vector<Row> rows(static_cast<std::size_t>(fixtures));
                const std::uint64_t base = r.config.seed;
                for_each_trial(static_cast<std::uint64_t>(fixtures), resolve_workers(workers), [&](std::uint64_t i) {
                    const auto& cp = lowers[i % lowers.size()];
                    const auto& H = patterns[(i / lowers.size()) % patterns.size()];
                    Row& row = rows[i];
                    row.n = n_min + static_cast<int>(i % static_cast<std::uint64_t>(n_max - n_min + 1));
                    for (int att = 0; att < max_attempts; ++att) {
                        const std::uint64_t s = derive_seed(base, "fixture", i * 1000 + static_cast<std::uint64_t>(att));
                        row.attempts = att + 1;
                        try {
                            const ColourSystem cs = plain_fixture(cp, row.n, p, s);
                            const Graph G0 = sample_gnp(static_cast<int>(cs.uncoloured().size()), p,
                                                        derive_seed(s, "g0", 0));
                            const auto d = decompose(cs, G0, H);
                            row.W = static_cast<int>(d.W.size());
                            row.holds = d.identity_holds;
                            return;
                        } catch (const PreconditionError&) {
                            throw;
                        } catch (const ValidationError&) {
                            // a shade pattern without a witness; redraw
                        }
                    }
                    throw CapacityError("decompose: no fixture with every pattern represented after " +
                                        std::to_string(max_attempts) + " attempts");
                });
                r.seeds.emplace_back("fixture stream", derive_seed(base, "fixture", 0));
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    const auto& cp = lowers[i % lowers.size()];
                    const auto& H = patterns[(i / lowers.size()) % patterns.size()];
                    r.summary.add({static_cast<std::int64_t>(i), std::int64_t{cp.g}, pattern_label(H),
                                   std::int64_t{rows[i].n}, std::int64_t{rows[i].W}, std::int64_t{rows[i].attempts},
                                   rows[i].holds});
                }
            }};
}

Plan plan_dispersedness(const ExperimentConfig& cfg)
{
    Params P(cfg.params, cfg.kind);
    const ColourParams cp = colour_params(P, {1}, {1});
    require_restricted(cp, "dispersedness");
    const std::vector<int> ns = checked_orders(P.ints("n", {100, 200, 400}), cp, "dispersedness", 2);
    const PatternGraph H = P.pattern("H");
    const RationalProb p = P.prob("p");
    const double q = P.get<double>("q", 0.1);
    P.finish();
    require_trials(cfg);
    if (!(q > 0 && q <= 1)) throw ValidationError("dispersedness: q must lie in (0, 1]");
    return {{{"n", CellType::Int},
             {"max_frequency", CellType::Real},
             {"low", CellType::Real},
             {"high", CellType::Real},
             {"distinct_tables", CellType::Int},
             {"q", CellType::Real},
             {"dispersed", CellType::Flag}},
            [=](ResultRecord& r, unsigned workers) {
                for (int n : ns) {
                    const std::uint64_t s = derive_seed(r.config.seed, "fixture", static_cast<std::uint64_t>(n));
                    r.seeds.emplace_back("fixture n=" + std::to_string(n), s);
                    const auto rcs = restricted_fixture(cp, n, p, s);
                    const Graph G0 = sample_gnp(static_cast<int>(rcs.system().uncoloured().size()), p, derive_seed(s, "g0", 0));
                    const auto rep = dispersedness_estimate(rcs, G0, H, p, q, r.config.trials, s, workers);
                    r.summary.add({std::int64_t{n}, rep.max_frequency.estimate, rep.max_frequency.interval.low,
                                   rep.max_frequency.interval.high, static_cast<std::int64_t>(rep.distinct_tables), q,
                                   rep.dispersed});
                    r.runs.push_back({{"n", n}, {"attaining", to_json(rep.attaining)}, {"warnings", rep.warnings}});
                }
            }};
}

Plan plan_general_position(const ExperimentConfig& cfg)
{
    Params P(cfg.params, cfg.kind);
    const std::string mode = P.get<std::string>("mode", "sets");
    const int samples = P.get<int>("samples", 100);
    const RationalProb p = P.prob("p");
    if (samples < 1) throw ValidationError("general-position: samples must be positive");
    const std::vector<Column> cols{{"sample", CellType::Int},         {"m", CellType::Int},
                                   {"ground", CellType::Int},         {"K", CellType::Int},
                                   {"pass", CellType::Flag},          {"worst_deviation", CellType::Real},
                                   {"threshold", CellType::Real},     {"slack", CellType::Real},
                                   {"class", CellType::Text}};
    if (mode == "sets") {
        const int m = P.get<int>("m", 4), ground = P.get<int>("ground", 1000), K = P.get<int>("K", 1);
        P.finish();
        if (m < 0 || m > 20 || ground < 1 || K < 1)
            throw ValidationError("general-position: need 0 <= m <= 20, ground >= 1, K >= 1");
        return {cols, [=](ResultRecord& r, unsigned) {
                    for (int s = 0; s < samples; ++s) {
                        const std::uint64_t seed = derive_seed(r.config.seed, "sets", static_cast<std::uint64_t>(s));
                        Engine e(seed);
                        BernoulliStream coin(e, p);
                        SetFamily f;
                        for (int v = 0; v < ground; ++v) f.ground.push_back(v);
                        for (int k = 0; k < m; ++k) {
                            VertexSet set(ground);
                            for (int v = 0; v < ground; ++v)
                                if (coin.next()) set.insert(v);
                            f.sets.push_back(std::move(set));
                        }
                        const auto rep = general_position_check(f, p, K);
                        r.summary.add({std::int64_t{s}, std::int64_t{m}, std::int64_t{ground}, std::int64_t{K}, rep.pass,
                                       rep.worst_deviation, rep.threshold, rep.slack, std::string()});
                    }
                }};
    }
    if (mode == "system") {
        const ColourParams cp = colour_params(P, {1}, {1});
        const int n = checked_orders(P.ints("n", {1000}), cp, "general-position").front();
        P.finish();
        return {cols, [=](ResultRecord& r, unsigned) {
                    for (int s = 0; s < samples; ++s) {
                        const std::uint64_t seed = derive_seed(r.config.seed, "fixture", static_cast<std::uint64_t>(s));
                        const ColourSystem cs = plain_fixture(cp, n, p, seed);
                        const SetFamily f = neighbourhood_family(cs);
                        int K = 1;
                        for (int i = 0; i < cs.g(); ++i) K *= 3;
                        const auto rep = general_position_check(f, p, K);
                        r.summary.add({std::int64_t{s}, std::int64_t{f.m()}, static_cast<std::int64_t>(f.ground.size()),
                                       std::int64_t{K}, rep.pass, rep.worst_deviation, rep.threshold, rep.slack,
                                       to_string(classify_family(f, p, cs.g()))});
                    }
                }};
    }
    P.fail("mode", "must be \"sets\" or \"system\"");
}

Plan plan_halasz(const ExperimentConfig& cfg)
{
    Params P(cfg.params, cfg.kind);
    const std::vector<int> sizes = P.ints("sizes", {100, 400, 1600});
    const int d = P.get<int>("d", 2);
    const RationalProb p = P.prob("p");
    const double factor = P.get<double>("factor", 3.0);
    const double threshold = P.get<double>("hypothesis_threshold", 1e-3);
    P.finish();
    require_trials(cfg);
    if (d < 1 || d > 8) throw ValidationError("halasz: d must be in 1..8");
    for (int N : sizes)
        if (N < 2 * d) throw ValidationError("halasz: every N must be at least 2d");
    if (p.is_zero() || p.is_one()) throw ValidationError("halasz: p must lie strictly between 0 and 1");
    return {{{"N", CellType::Int},
             {"d", CellType::Int},
             {"radius", CellType::Real},
             {"probability", CellType::Real},
             {"low", CellType::Real},
             {"high", CellType::Real},
             {"shape", CellType::Real},
             {"fitted_c", CellType::Real},
             {"exact", CellType::Real},
             {"exact_in_interval", CellType::Flag},
             {"hypothesis_frequency", CellType::Real},
             {"bounded", CellType::Flag}},
            [=](ResultRecord& r, unsigned workers) {
                const std::uint64_t base = r.config.seed;
                std::vector<std::size_t> Ns(sizes.begin(), sizes.end());
                auto setup = [&](std::size_t N) {
                    auto fc = linear_halasz_setup(N, static_cast<std::size_t>(d), p, r.config.trials,
                                                  derive_seed(base, "halasz", N));
                    fc.second.hypothesis_threshold = threshold;
                    return fc;
                };
                const HalaszScaling sc = halasz_scaling(Ns, setup, factor, workers);
                for (std::size_t k = 0; k < Ns.size(); ++k) {
                    const auto& rep = sc.reports[k];
                    r.seeds.emplace_back("halasz N=" + std::to_string(Ns[k]), derive_seed(base, "halasz", Ns[k]));
                    // product of binomial point masses at the rounded means
                    const auto cfgk = setup(Ns[k]).second;
                    const unsigned long block = Ns[k] / static_cast<std::size_t>(d);
                    Rational exact = 1;
                    for (double xj : cfgk.x) {
                        BigInt c;
                        const auto x = static_cast<unsigned long>(xj);
                        mpz_bin_uiui(c.get_mpz_t(), block, x);
                        exact *= Rational(c) * rational_pow(p.value(), static_cast<unsigned>(x)) *
                                 rational_pow(p.complement(), static_cast<unsigned>(block - x));
                    }
                    const double ex = to_double(exact);
                    r.summary.add({static_cast<std::int64_t>(Ns[k]), std::int64_t{d}, rep.radius, rep.small_ball.estimate,
                                   rep.small_ball.interval.low, rep.small_ball.interval.high, rep.shape, rep.fitted_c, ex,
                                   rep.small_ball.interval.contains(ex), rep.hypothesis_max_frequency, sc.bounded});
                    r.runs.push_back(to_json(rep));
                }
                r.runs.push_back({{"c_min", sc.c_min}, {"c_max", sc.c_max}, {"factor", sc.factor}, {"bounded", sc.bounded}});
            }};
}

// First attempt whose extension is p-general; the attempt count is reported.
struct NuFixture {
    RestrictedColourSystem rcs;
    Extension S;
    int attempts = 0;
    bool general = false;
};

NuFixture general_nu_fixture(const ColourParams& cp, int n, const RationalProb& p, std::uint64_t seed, int max_attempts)
{
    NuFixture fx;
    for (int att = 0; att < max_attempts; ++att) {
        fx.attempts = att + 1;
        const std::uint64_t s = derive_seed(seed, "attempt", static_cast<std::uint64_t>(att));
        fx.rcs = restricted_fixture(cp, n, p, s);
        fx.S = sample_extension(fx.rcs, p, derive_seed(s, "extension", 0));
        if (u_star(fx.rcs).empty()) continue;
        if (classify_generality(apply_extension(fx.rcs, fx.S), p) == Generality::PGeneral) {
            fx.general = true;
            return fx;
        }
    }
    return fx;
}

Plan plan_nu_gamma(const ExperimentConfig& cfg)
{
    Params P(cfg.params, cfg.kind);
    const ColourParams cp = colour_params(P, {1}, {1});
    require_restricted(cp, "nu-gamma");
    const std::vector<int> ns = checked_orders(P.ints("sizes", {100, 200, 400}), cp, "nu-gamma", 2);
    const int fixtures = P.get<int>("fixtures", 1);
    const PatternGraph H = P.pattern("H");
    const RationalProb p = P.prob("p");
    const int max_attempts = P.get<int>("max_attempts", 20);
    P.finish();
    require_h(H, cp.g, "nu-gamma");
    if (fixtures < 1 || max_attempts < 1) throw ValidationError("nu-gamma: fixtures and max_attempts must be positive");
    return {{{"n", CellType::Int},
             {"fixture", CellType::Int},
             {"attempts", CellType::Int},
             {"deviation", CellType::Exact},
             {"reference", CellType::Real},
             {"ratio", CellType::Real},
             {"warnings", CellType::Int}},
            [=](ResultRecord& r, unsigned workers) {
                struct Out {
                    NuGammaReport rep;
                    int attempts = 0;
                };
                for (int n : ns) {
                    std::vector<Out> outs(static_cast<std::size_t>(fixtures));
                    const std::uint64_t base = derive_seed(r.config.seed, "nu-gamma", static_cast<std::uint64_t>(n));
                    r.seeds.emplace_back("nu-gamma n=" + std::to_string(n), base);
                    for_each_trial(outs.size(), resolve_workers(workers), [&](std::uint64_t f) {
                        const auto fx = general_nu_fixture(cp, n, p, derive_seed(base, "fixture", f), max_attempts);
                        const auto ustar = u_star(fx.rcs);
                        if (ustar.empty()) throw PreconditionError("nu-gamma: no fixture with a nonempty U*");
                        outs[f].rep = nu_gamma_check(fx.rcs, fx.S, H, p, ustar.front(), fx.rcs.top_vertices().front());
                        outs[f].attempts = fx.attempts;
                    });
                    for (std::size_t f = 0; f < outs.size(); ++f) {
                        const auto& rep = outs[f].rep;
                        r.summary.add({std::int64_t{n}, static_cast<std::int64_t>(f), std::int64_t{outs[f].attempts},
                                       rep.deviation, rep.reference, rep.ratio,
                                       static_cast<std::int64_t>(rep.warnings.size())});
                        r.runs.push_back({{"n", n}, {"fixture", f}, {"warnings", rep.warnings}});
                    }
                }
            }};
}

Plan plan_kappa_gamma(const ExperimentConfig& cfg)
{
    Params P(cfg.params, cfg.kind);
    const ColourParams cp = colour_params(P, {}, {});
    const std::vector<int> ns = checked_orders(P.ints("sizes", {200, 800}), cp, "kappa-gamma", 2);
    const PatternGraph H = P.pattern("H");
    const RationalProb p = P.prob("p");
    const json pattern_j = P.get<json>("pattern", "full");
    P.finish();
    require_trials(cfg);
    require_h(H, cp.g + 1, "kappa-gamma");
    std::int64_t pattern = -1;
    if (pattern_j.is_number_integer()) pattern = pattern_j.get<std::int64_t>();
    else if (pattern_j != "full") throw ValidationError("kappa-gamma: pattern must be \"full\" or a mask");
    if (pattern >= 0 && pattern >= (std::int64_t{1} << std::min(62, cp.pattern_bits(cp.g))))
        throw ValidationError("kappa-gamma: pattern mask out of range");
    return {{{"n", CellType::Int},
             {"trials", CellType::Int},
             {"median", CellType::Real},
             {"max", CellType::Real},
             {"reference", CellType::Real},
             {"warnings", CellType::Int}},
            [=](ResultRecord& r, unsigned workers) {
                for (int n : ns) {
                    const std::uint64_t s = derive_seed(r.config.seed, "fixture", static_cast<std::uint64_t>(n));
                    r.seeds.emplace_back("fixture n=" + std::to_string(n), s);
                    const ColourSystem cs = plain_fixture(cp, n, p, s);
                    const UPartition part = u_partition(cs);
                    const std::uint64_t mask = pattern < 0 ? part.full_mask : static_cast<std::uint64_t>(pattern);
                    const auto& star = part.star();
                    const auto& cls = part.classes.at(static_cast<std::size_t>(mask));
                    int u = -1, v = -1;
                    if (!star.empty()) u = star.front();
                    for (int w : cls)
                        if (w != u) {
                            v = w;
                            break;
                        }
                    if (u < 0 || v < 0) throw PreconditionError("kappa-gamma: U* or U_e too small in the fixture");
                    const auto rep = kappa_gamma_check(cs, H, p, mask, u, v, r.config.trials, s, workers);
                    r.summary.add({std::int64_t{n}, static_cast<std::int64_t>(r.config.trials), rep.median, rep.max,
                                   rep.reference, static_cast<std::int64_t>(rep.warnings.size())});
                    r.runs.push_back(to_json(rep));
                }
            }};
}

RationalTable rounded(const RationalTable& t)
{
    RationalTable out = t;
    for (std::size_t f = 0; f < out.size(); ++f) {
        BigInt q;
        const Rational x = t[f] + Rational(1, 2);
        mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        out[f] = Rational(q);
    }
    return out;
}

Plan plan_scale_probe(const ExperimentConfig& cfg)
{
    Params P(cfg.params, cfg.kind);
    const std::string mode = P.get<std::string>("mode", "medium");
    if (mode != "medium" && mode != "rough") P.fail("mode", "must be \"medium\" or \"rough\"");
    const bool medium = mode == "medium";
    const ColourParams cp = medium ? colour_params(P, {1}, {1}) : colour_params(P, {}, {});
    if (medium) require_restricted(cp, "scale-probe");
    const std::vector<int> ns = checked_orders(P.ints("sizes", {100, 400}), cp, "scale-probe", 2);
    const PatternGraph H = P.pattern("H");
    const RationalProb p = P.prob("p");
    const bool use_mean = !P.has("lambda") || P.get<json>("lambda", "mean") == "mean";
    const Rational lambda = use_mean ? Rational(0) : P.rational("lambda");
    P.finish();
    require_trials(cfg);
    require_h(H, medium ? cp.g : cp.g + 1, "scale-probe");
    return {{{"mode", CellType::Text},
             {"n", CellType::Int},
             {"lambda_max", CellType::Exact},
             {"probability", CellType::Real},
             {"low", CellType::Real},
             {"high", CellType::Real},
             {"successes", CellType::Int},
             {"trials", CellType::Int}},
            [=](ResultRecord& r, unsigned workers) {
                for (int n : ns) {
                    const std::uint64_t s = derive_seed(r.config.seed, "fixture", static_cast<std::uint64_t>(n));
                    r.seeds.emplace_back("fixture n=" + std::to_string(n), s);
                    EstimationResult est;
                    RationalTable lam;
                    if (medium) {
                        const auto rcs = restricted_fixture(cp, n, p, s);
                        lam = use_mean ? rounded(exact_mu_averaged(rcs, H, p))
                                       : RationalTable(cp.shape(), lambda);
                        est = medium_scale_probe(rcs, H, p, lam, r.config.trials, s, workers);
                    } else {
                        const ColourSystem cs = plain_fixture(cp, n, p, s);
                        lam = use_mean ? rounded(expected_copies(cs, H, p)) : RationalTable(cp.shape(), lambda);
                        est = rough_scale_probe(cs, H, p, lam, r.config.trials, s, workers);
                    }
                    Rational top = lam[0];
                    for (std::size_t f = 0; f < lam.size(); ++f) top = std::max(top, lam[f]);
                    r.summary.add({mode, std::int64_t{n}, top, est.estimate, est.interval.low, est.interval.high,
                                   static_cast<std::int64_t>(est.successes), static_cast<std::int64_t>(est.trials)});
                    r.runs.push_back({{"n", n}, {"lambda", to_json(lam)}, {"estimate", estimate_json(est)}});
                }
            }};
}

Plan plan_concentration(const ExperimentConfig& cfg)
{
    Params P(cfg.params, cfg.kind);
    const ColourParams cp = colour_params(P, {1}, {1});
    require_restricted(cp, "concentration");
    const std::vector<int> ns = checked_orders(P.ints("sizes", {200}), cp, "concentration", 2);
    const PatternGraph H = P.pattern("H");
    const RationalProb p = P.prob("p");
    const auto scale_names =
        P.get<std::vector<std::string>>("scales", std::vector<std::string>{"given-extension", "averaged"});
    P.finish();
    require_trials(cfg);
    require_h(H, cp.g, "concentration");
    std::vector<ConcentrationScale> scales;
    for (const auto& s : scale_names) {
        if (s == "given-extension") scales.push_back(ConcentrationScale::GivenExtension);
        else if (s == "averaged") scales.push_back(ConcentrationScale::Averaged);
        else throw ValidationError("concentration: unknown scale '" + s + "'");
    }
    return {{{"scale", CellType::Text},
             {"n", CellType::Int},
             {"threshold", CellType::Real},
             {"violations", CellType::Int},
             {"frequency", CellType::Real},
             {"low", CellType::Real},
             {"high", CellType::Real},
             {"max_ratio", CellType::Real}},
            [=](ResultRecord& r, unsigned workers) {
                for (int n : ns) {
                    const std::uint64_t s = derive_seed(r.config.seed, "fixture", static_cast<std::uint64_t>(n));
                    r.seeds.emplace_back("fixture n=" + std::to_string(n), s);
                    const auto rcs = restricted_fixture(cp, n, p, s);
                    for (std::size_t k = 0; k < scales.size(); ++k) {
                        const auto rep = concentration_probe(rcs, H, p, scales[k], r.config.trials, s, workers);
                        const auto& v = rep.violations;
                        r.summary.add({scale_names[k], std::int64_t{n}, rep.scale, static_cast<std::int64_t>(v.successes),
                                       v.estimate, v.interval.low, v.interval.high, rep.max_ratio});
                        r.runs.push_back(to_json(rep));
                    }
                }
            }};
}

const std::map<std::string, Builder>& builders()
{
    static const std::map<std::string, Builder> m{
        {"distribution", plan_distribution}, {"pointprob", plan_pointprob},
        {"span-check", plan_span_check},     {"gamma", plan_gamma},
        {"decompose", plan_decompose},       {"dispersedness", plan_dispersedness},
        {"general-position", plan_general_position},
        {"halasz", plan_halasz},             {"nu-gamma", plan_nu_gamma},
        {"kappa-gamma", plan_kappa_gamma},   {"scale-probe", plan_scale_probe},
        {"concentration", plan_concentration}};
    return m;
}

Plan make_plan(const ExperimentConfig& cfg)
{
    const auto& b = builders();
    const auto it = b.find(cfg.kind);
    if (it == b.end()) throw ValidationError("unknown experiment kind '" + cfg.kind + "'");
    return it->second(cfg);
}

std::string utc_now()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

void validate_config(const ExperimentConfig& cfg)
{
    make_plan(cfg);
}

ResultRecord run_experiment(const ExperimentConfig& cfg, unsigned workers)
{
    Plan plan = make_plan(cfg);
    ResultRecord r;
    r.config = cfg;
    r.summary.columns = plan.columns;
    r.started = utc_now();
    plan.run(r, resolve_workers(workers));
    r.finished = utc_now();
    return r;
}

} // namespace aclab::lab
