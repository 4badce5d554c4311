#include "aclab/probes.hpp"

#include <algorithm>
#include <cmath>

#include "aclab/core.hpp"
#include "aclab/cube.hpp"
#include "aclab/errors.hpp"
#include "aclab/expectation.hpp"
#include "aclab/gamma.hpp"
#include "aclab/gnp.hpp"
#include "aclab/parallel.hpp"
#include "aclab/psi.hpp"
#include "aclab/rng.hpp"
#include "aclab/structure.hpp"

namespace aclab {

double log_scale(int n, double exponent)
{
    return std::pow(static_cast<double>(n), exponent) * std::log(static_cast<double>(n));
}

namespace {

Rational int_power(int n, int k)
{
    // k may be negative when h < g + 1; callers reject that case first.
    return rational_pow(Rational(n), static_cast<unsigned>(k));
}

Rational sup_distance_int(const IntTable& a, const RationalTable& b)
{
    Rational m = 0;
    for (std::size_t f = 0; f < a.size(); ++f) {
        Rational d = Rational(static_cast<long>(a[f])) - b[f];
        if (d < 0) d = -d;
        if (d > m) m = d;
    }
    return m;
}

void check_pattern_size(const PatternGraph& H, int g)
{
    if (g < 1) throw ValidationError("this probe needs g >= 1");
    if (H.h() < g + 1) throw ValidationError("this probe needs h >= g + 1");
}

} // namespace

NuGammaReport nu_gamma_check(const RestrictedColourSystem& rcs, const Extension& S, const PatternGraph& H,
                             const RationalProb& p, int u, int v)
{
    const auto& cs = rcs.system();
    const int g = cs.g();
    check_pattern_size(H, g);
    NuGammaReport rep;
    rep.n = cs.order();
    rep.nu = exact_nu(rcs, S, H, p, u, v);

    const auto ustar = u_star(rcs);
    if (!std::binary_search(ustar.begin(), ustar.end(), u)) rep.warnings.push_back("u is not in U*");
    try {
        if (classify_generality(apply_extension(rcs, S), p) != Generality::PGeneral)
            rep.warnings.push_back("extended system is not p-general");
    } catch (const CapacityError& ex) {
        rep.warnings.push_back(std::string("generality not checked: ") + ex.what());
    }

    const Core core = core_of_restricted(rcs);
    const auto coloured = cs.coloured_vertices();
    const int vc = static_cast<int>(std::find(coloured.begin(), coloured.end(), v) - coloured.begin());
    const int e = core.edge_index(vc, core.hub(), g, 1);
    const RationalTable G = gamma_edge(core, H, e, p);
    const Rational scale = int_power(rep.n, H.h() - g - 1);
    rep.scaled_gamma = RationalTable(G.shape(), Rational(0));
    for (std::size_t f = 0; f < G.size(); ++f) rep.scaled_gamma[f] = scale * G[f];
    rep.deviation = sup_distance(rep.nu, rep.scaled_gamma);
    rep.reference = log_scale(rep.n, H.h() - g - 1.5);
    rep.ratio = to_double(rep.deviation) / rep.reference;
    return rep;
}

KappaGammaReport kappa_gamma_check(const ColourSystem& cs, const PatternGraph& H, const RationalProb& p,
                                   std::uint64_t pattern, int u, int v, std::uint64_t trials, std::uint64_t seed,
                                   unsigned workers)
{
    const int g = cs.g() + 1;
    check_pattern_size(H, g);
    if (u == v) throw ValidationError("kappa check needs distinct u and v");
    if (u < 0 || v < 0 || u >= cs.order() || v >= cs.order() || cs.is_coloured(u) || cs.is_coloured(v))
        throw ValidationError("kappa check needs uncoloured u and v");
    if (trials < 1) throw ValidationError("kappa check needs trials >= 1");
    const Core core = extended_core(cs);
    if (pattern >= core.top_edges().size()) throw ValidationError("pattern index out of range");

    KappaGammaReport rep;
    rep.n = cs.order();
    const UPartition part = u_partition(cs);
    if (part.class_of(u) != static_cast<std::int64_t>(part.full_mask)) rep.warnings.push_back("u is not in U*");
    if (part.class_of(v) != static_cast<std::int64_t>(pattern)) rep.warnings.push_back("v is not in U_e");

    const RationalTable G = gamma_edge(core, H, core.top_edges()[static_cast<std::size_t>(pattern)], p);
    const Rational scale = int_power(rep.n, H.h() - g - 1);
    RationalTable target(cs.params().shape(), Rational(0));
    for (std::size_t f = 0; f < G.size(); ++f) target[f] = scale * G[f];
    rep.reference = log_scale(rep.n, H.h() - g - 1.5);

    const int nU = static_cast<int>(cs.uncoloured().size());
    rep.ratios.assign(trials, 0.0);
    for_each_trial(trials, resolve_workers(workers), [&](std::uint64_t t) {
        const Graph G0 = sample_gnp(nU, p, derive_seed(seed, "g0", t));
        const IntTable k = kappa_table(H, cs, G0, u, v);
        rep.ratios[t] = to_double(sup_distance_int(k, target)) / rep.reference;
    });
    std::vector<double> sorted = rep.ratios;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    rep.median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    rep.max = sorted.back();
    return rep;
}

ConcentrationReport concentration_probe(const RestrictedColourSystem& rcs, const PatternGraph& H,
                                        const RationalProb& p, ConcentrationScale kind, std::uint64_t trials,
                                        std::uint64_t seed, unsigned workers)
{
    const auto& cs = rcs.system();
    const int g = cs.g();
    check_pattern_size(H, g);
    if (trials < 1) throw ValidationError("concentration probe needs trials >= 1");
    const int n = cs.order();
    ConcentrationReport rep;
    rep.scale_kind = kind;
    rep.scale = log_scale(n, kind == ConcentrationScale::GivenExtension ? H.h() - g - 1.0 : H.h() - g - 0.5);

    RationalTable averaged;
    if (kind == ConcentrationScale::Averaged) averaged = exact_mu_averaged(rcs, H, p);
    const int nU = static_cast<int>(cs.uncoloured().size());
    std::vector<double> ratio(trials, 0.0);
    for_each_trial(trials, resolve_workers(workers), [&](std::uint64_t t) {
        const Extension S = sample_extension(rcs, p, derive_seed(seed, "extension", t));
        const Graph G0 = sample_gnp(nU, p, derive_seed(seed, "g0", t));
        const ColourSystem sys = apply_extension(rcs, S);
        const IntTable psi = psi_table(H, sys, G0);
        const RationalTable mu = kind == ConcentrationScale::Averaged ? averaged : exact_mu(rcs, S, H, p);
        ratio[t] = to_double(sup_distance_int(psi, mu)) / rep.scale;
    });
    std::uint64_t over = 0;
    for (double r : ratio) {
        if (r > 1.0) ++over;
        rep.max_ratio = std::max(rep.max_ratio, r);
    }
    rep.violations = make_estimate(over, trials, seed);
    return rep;
}

EstimationResult medium_scale_probe(const RestrictedColourSystem& rcs, const PatternGraph& H, const RationalProb& p,
                                    const RationalTable& lambda, std::uint64_t trials, std::uint64_t seed,
                                    unsigned workers)
{
    const auto& cs = rcs.system();
    check_pattern_size(H, cs.g());
    if (trials < 1) throw ValidationError("scale probe needs trials >= 1");
    if (lambda.shape() != cs.params().shape()) throw ValidationError("lambda has the wrong shape");
    const double window = log_scale(cs.order(), H.h() - cs.g() - 1.0);
    std::vector<std::uint8_t> inside(trials, 0);
    for_each_trial(trials, resolve_workers(workers), [&](std::uint64_t t) {
        const Extension S = sample_extension(rcs, p, derive_seed(seed, "extension", t));
        inside[t] = to_double(sup_distance(exact_mu(rcs, S, H, p), lambda)) <= window;
    });
    std::uint64_t s = 0;
    for (auto x : inside) s += x;
    return make_estimate(s, trials, seed);
}

EstimationResult rough_scale_probe(const ColourSystem& cs, const PatternGraph& H, const RationalProb& p,
                                   const RationalTable& lambda, std::uint64_t trials, std::uint64_t seed,
                                   unsigned workers)
{
    const int g = cs.g() + 1;
    check_pattern_size(H, g);
    if (trials < 1) throw ValidationError("scale probe needs trials >= 1");
    if (lambda.shape() != cs.params().shape()) throw ValidationError("lambda has the wrong shape");
    const double window = log_scale(cs.order(), H.h() - g - 0.5);
    const int nU = static_cast<int>(cs.uncoloured().size());
    std::vector<std::uint8_t> inside(trials, 0);
    for_each_trial(trials, resolve_workers(workers), [&](std::uint64_t t) {
        const Graph G0 = sample_gnp(nU, p, derive_seed(seed, "g0", t));
        inside[t] = to_double(sup_distance_int(psi_table(H, cs, G0), lambda)) <= window;
    });
    std::uint64_t s = 0;
    for (auto x : inside) s += x;
    return make_estimate(s, trials, seed);
}

nlohmann::json to_json(const NuGammaReport& r)
{
    return {{"n", r.n},
            {"nu", to_json(r.nu)},
            {"scaled_gamma", to_json(r.scaled_gamma)},
            {"deviation", to_json(r.deviation)},
            {"reference", r.reference},
            {"ratio", r.ratio},
            {"warnings", r.warnings}};
}

nlohmann::json to_json(const KappaGammaReport& r)
{
    return {{"n", r.n},           {"reference", r.reference}, {"median", r.median},
            {"max", r.max},       {"ratios", r.ratios},       {"warnings", r.warnings}};
}

nlohmann::json to_json(const ConcentrationReport& r)
{
    return {{"scale_kind", r.scale_kind == ConcentrationScale::GivenExtension ? "given-extension" : "averaged"},
            {"scale", r.scale},
            {"violations", to_json(r.violations)},
            {"max_ratio", r.max_ratio}};
}

} // namespace aclab
