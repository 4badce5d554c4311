#include "aclab/cube.hpp"

#include <algorithm>
#include <cmath>

#include "aclab/counting.hpp"
#include "aclab/errors.hpp"
#include "aclab/parallel.hpp"
#include "aclab/rng.hpp"
#include "aclab/span.hpp"

namespace aclab {

CubeFunction::CubeFunction(std::size_t N, std::size_t d, Eval eval, Delta delta)
    : N_(N), d_(d), eval_(std::move(eval)), delta_(std::move(delta))
{
    if (!eval_) throw ValidationError("cube function needs an evaluator");
    if (d_ == 0) throw ValidationError("cube function output dimension must be positive");
}

std::vector<double> CubeFunction::operator()(const CubePoint& xi) const
{
    if (xi.size() != N_) throw ValidationError("cube point has wrong length");
    return eval_(xi);
}

std::vector<double> CubeFunction::delta(const CubePoint& xi, std::size_t i) const
{
    if (i >= N_) throw ValidationError("cube coordinate out of range");
    if (delta_) return delta_(xi, i);
    CubePoint y = xi;
    y[i] = 1;
    std::vector<double> hi = eval_(y);
    y[i] = 0;
    const std::vector<double> lo = eval_(y);
    for (std::size_t k = 0; k < hi.size(); ++k) hi[k] -= lo[k];
    return hi;
}

CubeFunction CubeFunction::linear(std::vector<std::vector<double>> coefficients, std::vector<double> offset)
{
    const std::size_t N = coefficients.size();
    const std::size_t d = N ? coefficients[0].size() : offset.size();
    if (offset.empty()) offset.assign(d, 0.0);
    for (const auto& row : coefficients)
        if (row.size() != d) throw ValidationError("linear cube function rows differ in length");
    if (offset.size() != d) throw ValidationError("linear cube function offset has wrong length");
    auto rows = std::make_shared<const std::vector<std::vector<double>>>(std::move(coefficients));
    auto eval = [rows, offset](const CubePoint& xi) {
        std::vector<double> out = offset;
        for (std::size_t i = 0; i < xi.size(); ++i)
            if (xi[i])
                for (std::size_t k = 0; k < out.size(); ++k) out[k] += (*rows)[i][k];
        return out;
    };
    auto delta = [rows](const CubePoint&, std::size_t i) { return (*rows)[i]; };
    return CubeFunction(N, d, eval, delta);
}

namespace {

Graph graph_from_bits(int n, const CubePoint& xi)
{
    Graph G(n);
    std::size_t k = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++k)
            if (xi[k]) G.add_edge(u, v);
    return G;
}

} // namespace

CubeFunction CubeFunction::subgraph_count(const PatternGraph& H, int n)
{
    check_count_capacity(H, n);
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    auto eval = [H, n](const CubePoint& xi) {
        return std::vector<double>{static_cast<double>(count_labelled_copies(H, graph_from_bits(n, xi)))};
    };
    auto delta = [H, n, pairs](const CubePoint& xi, std::size_t i) {
        const Graph G = graph_from_bits(n, xi);
        return std::vector<double>{static_cast<double>(delta_edge(H, G, pairs[i].first, pairs[i].second))};
    };
    return CubeFunction(pairs.size(), 1, eval, delta);
}

CubePoint sample_cube(std::size_t N, const RationalProb& p, std::uint64_t seed, std::string_view label,
                      std::uint64_t trial)
{
    Engine engine(derive_seed(seed, label, trial));
    BernoulliStream coin(engine, p);
    CubePoint xi(N);
    for (auto& b : xi) b = coin.next() ? 1 : 0;
    return xi;
}

double sup_norm_distance(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size()) throw ValidationError("vector lengths differ");
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::fabs(a[k] - b[k]));
    return m;
}

DeltaProfile delta_profile(const CubeFunction& f, std::size_t i, const RationalProb& p,
                           const std::vector<double>& target, double r, std::uint64_t trials, std::uint64_t seed,
                           unsigned workers)
{
    if (trials < 1) throw ValidationError("delta profile needs trials >= 1");
    if (target.size() != f.d()) throw ValidationError("delta target has wrong length");
    std::vector<std::vector<double>> deltas(trials);
    for_each_trial(trials, resolve_workers(workers),
                   [&](std::uint64_t t) { deltas[t] = f.delta(sample_cube(f.N(), p, seed, "delta", t), i); });
    DeltaProfile out;
    out.coordinate = i;
    out.mean.assign(f.d(), 0.0);
    std::uint64_t far = 0;
    for (const auto& dv : deltas) {
        const double dist = sup_norm_distance(dv, target);
        out.max_distance = std::max(out.max_distance, dist);
        if (dist >= r) ++far;
        for (std::size_t k = 0; k < dv.size(); ++k) out.mean[k] += dv[k];
    }
    for (auto& m : out.mean) m /= static_cast<double>(trials);
    out.deviation = make_estimate(far, trials, seed);
    return out;
}

EstimationResult small_ball_estimate(const CubeFunction& f, const std::vector<double>& x, double radius,
                                     const RationalProb& p, std::uint64_t trials, std::uint64_t seed,
                                     unsigned workers)
{
    if (trials < 1) throw ValidationError("small-ball estimate needs trials >= 1");
    if (x.size() != f.d()) throw ValidationError("small-ball centre has wrong length");
    std::vector<std::uint8_t> hit(trials, 0);
    for_each_trial(trials, resolve_workers(workers), [&](std::uint64_t t) {
        hit[t] = sup_norm_distance(f(sample_cube(f.N(), p, seed, "ball", t)), x) < radius ? 1 : 0;
    });
    std::uint64_t s = 0;
    for (auto h : hit) s += h;
    return make_estimate(s, trials, seed);
}

HalaszReport halasz_report(const CubeFunction& f, const HalaszConfig& cfg, unsigned workers)
{
    const std::size_t N = f.N(), d = f.d();
    if (N < 2) throw ValidationError("Halasz probe needs N >= 2");
    if (cfg.directions.empty() || cfg.directions.size() != cfg.classes.size())
        throw ValidationError("Halasz probe needs one direction per index class");
    for (const auto& v : cfg.directions)
        if (v.size() != d) throw ValidationError("direction vector has wrong length");
    if (exact_rank(cfg.directions) != static_cast<int>(d)) throw ValidationError("directions do not span R^d");
    if (cfg.x.size() != d) throw ValidationError("Halasz target has wrong length");
    if (!(cfg.s > 0) || !(cfg.r > 0)) throw ValidationError("Halasz scale s and radius r must be positive");
    std::vector<std::uint8_t> seen(N, 0);
    for (const auto& cls : cfg.classes) {
        if (static_cast<double>(cls.size()) + 1e-9 < cfg.epsilon * static_cast<double>(N))
            throw ValidationError("index class smaller than epsilon N");
        for (std::size_t i : cls) {
            if (i >= N) throw ValidationError("index class coordinate out of range");
            if (seen[i]++) throw ValidationError("index classes are not disjoint");
        }
    }
    const double logN = std::log(static_cast<double>(N));
    double radius = cfg.r * std::sqrt(static_cast<double>(N) * logN);
    // r = s / sqrt(N ln N) sits exactly on the boundary; undo the rounding.
    if (std::fabs(radius - cfg.s) <= 1e-9 * cfg.s) radius = cfg.s;
    if (radius < cfg.s) throw ValidationError("r sqrt(N ln N) must be at least s");

    HalaszReport rep;
    rep.N = N;
    rep.d = d;
    rep.radius = radius;
    rep.hypothesis_threshold = cfg.hypothesis_threshold;

    for (std::size_t j = 0; j < cfg.classes.size(); ++j) {
        std::vector<double> target(d);
        for (std::size_t k = 0; k < d; ++k) target[k] = cfg.s * to_double(cfg.directions[j][k]);
        const std::size_t checked = std::min(cfg.hypothesis_coordinates, cfg.classes[j].size());
        for (std::size_t q = 0; q < checked; ++q) {
            const std::size_t i = cfg.classes[j][q];
            const auto prof = delta_profile(f, i, cfg.p, target, cfg.r, cfg.hypothesis_trials,
                                            derive_seed(cfg.seed, "hypothesis", i), workers);
            rep.hypothesis_max_frequency = std::max(rep.hypothesis_max_frequency, prof.deviation.estimate);
        }
    }
    if (rep.hypothesis_max_frequency > cfg.hypothesis_threshold)
        rep.warnings.push_back("hypothesis violated: delta deviation frequency " +
                               std::to_string(rep.hypothesis_max_frequency) + " exceeds threshold " +
                               std::to_string(cfg.hypothesis_threshold));

    rep.small_ball = small_ball_estimate(f, cfg.x, radius, cfg.p, cfg.trials, cfg.seed, workers);
    rep.shape = std::pow(cfg.r * std::sqrt(logN) / cfg.s, static_cast<double>(d));
    rep.fitted_c = rep.small_ball.estimate / rep.shape;
    return rep;
}

std::pair<CubeFunction, HalaszConfig> linear_halasz_setup(std::size_t N, std::size_t d, const RationalProb& p,
                                                          std::uint64_t trials, std::uint64_t seed)
{
    if (d == 0 || N < 2 * d) throw ValidationError("linear Halasz setup needs N >= 2d");
    const std::size_t block = N / d;
    std::vector<std::vector<double>> coef(N, std::vector<double>(d, 0.0));
    HalaszConfig cfg;
    cfg.classes.assign(d, {});
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = j * block; i < (j + 1) * block; ++i) {
            coef[i][j] = 1.0;
            cfg.classes[j].push_back(i);
        }
        std::vector<Rational> dir(d, Rational(0));
        dir[j] = 1;
        cfg.directions.push_back(std::move(dir));
        cfg.x.push_back(std::floor(p.to_double() * static_cast<double>(block) + 0.5));
    }
    cfg.epsilon = static_cast<double>(block) / static_cast<double>(N);
    cfg.s = 1.0;
    cfg.r = 1.0 / std::sqrt(static_cast<double>(N) * std::log(static_cast<double>(N)));
    cfg.p = p;
    cfg.trials = trials;
    cfg.seed = seed;
    return {CubeFunction::linear(std::move(coef)), cfg};
}

HalaszScaling halasz_scaling(const std::vector<std::size_t>& sizes,
                             const std::function<std::pair<CubeFunction, HalaszConfig>(std::size_t)>& setup,
                             double factor, unsigned workers)
{
    HalaszScaling out;
    out.factor = factor;
    for (std::size_t N : sizes) {
        auto [f, cfg] = setup(N);
        out.reports.push_back(halasz_report(f, cfg, workers));
    }
    if (out.reports.empty()) return out;
    out.c_min = out.c_max = out.reports[0].fitted_c;
    for (const auto& r : out.reports) {
        out.c_min = std::min(out.c_min, r.fitted_c);
        out.c_max = std::max(out.c_max, r.fitted_c);
    }
    out.bounded = out.c_min > 0 && out.c_max <= factor * out.c_min;
    return out;
}

nlohmann::json to_json(const EstimationResult& e)
{
    return {{"estimate", e.estimate},   {"low", e.interval.low}, {"high", e.interval.high},
            {"successes", e.successes}, {"trials", e.trials},    {"seed", e.base_seed}};
}

nlohmann::json to_json(const HalaszReport& r)
{
    return {{"N", r.N},
            {"d", r.d},
            {"radius", r.radius},
            {"small_ball", to_json(r.small_ball)},
            {"shape", r.shape},
            {"fitted_c", r.fitted_c},
            {"hypothesis_max_frequency", r.hypothesis_max_frequency},
            {"hypothesis_threshold", r.hypothesis_threshold},
            {"threshold_substituted", r.threshold_substituted},
            {"warnings", r.warnings}};
}

} // namespace aclab
