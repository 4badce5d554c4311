#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "aclab/colour_system.hpp"
#include "aclab/extension.hpp"
#include "aclab/graph.hpp"
#include "aclab/stats.hpp"
#include "aclab/table.hpp"

namespace aclab {

struct NuGammaReport {
    int n = 0;                  // order of the system
    RationalTable nu;
    RationalTable scaled_gamma; // n^(h-g-1) Gamma_{C,e}
    Rational deviation;         // sup norm of the difference
    double reference = 0.0;     // n^(h-g-3/2) ln n
    double ratio = 0.0;
    std::vector<std::string> warnings;
};

// C is the core of rcs and e its hub edge at v. Precondition failures that
// do not make the numbers meaningless (u outside U*, G_S not p-general) are
// reported as warnings; malformed input throws ValidationError.
NuGammaReport nu_gamma_check(const RestrictedColourSystem& rcs, const Extension& S, const PatternGraph& H,
                             const RationalProb& p, int u, int v);

struct KappaGammaReport {
    int n = 0;
    double reference = 0.0;          // n^(h-g-3/2) ln n
    std::vector<double> ratios;      // per trial, in trial order
    double median = 0.0;
    double max = 0.0;
    std::vector<std::string> warnings;
};

// cs has g-1 colours; pattern picks the hub edge of extended_core(cs) (and so
// U_e). G0 for trial t uses derive_seed(seed, "g0", t).
KappaGammaReport kappa_gamma_check(const ColourSystem& cs, const PatternGraph& H, const RationalProb& p,
                                   std::uint64_t pattern, int u, int v, std::uint64_t trials, std::uint64_t seed,
                                   unsigned workers = 0);

enum class ConcentrationScale {
    GivenExtension,   // |psi - mu_{G,S}| against n^(h-g-1) ln n
    Averaged,         // |psi - mu_G| against n^(h-g-1/2) ln n
};

struct ConcentrationReport {
    ConcentrationScale scale_kind = ConcentrationScale::GivenExtension;
    double scale = 0.0;
    EstimationResult violations;
    double max_ratio = 0.0;    // max over trials of deviation / scale
};

// Trial t draws S from derive_seed(seed, "extension", t) and G0 from
// derive_seed(seed, "g0", t).
ConcentrationReport concentration_probe(const RestrictedColourSystem& rcs, const PatternGraph& H,
                                        const RationalProb& p, ConcentrationScale kind, std::uint64_t trials,
                                        std::uint64_t seed, unsigned workers = 0);

// Pr(||mu_{G,S} - lambda||_inf <= n^(h-g-1) ln n) over S.
EstimationResult medium_scale_probe(const RestrictedColourSystem& rcs, const PatternGraph& H, const RationalProb& p,
                                    const RationalTable& lambda, std::uint64_t trials, std::uint64_t seed,
                                    unsigned workers = 0);

// cs has g-1 colours. Pr(||psi(cs, G0) - lambda||_inf <= n^(h-g-1/2) ln n) over G0.
EstimationResult rough_scale_probe(const ColourSystem& cs, const PatternGraph& H, const RationalProb& p,
                                   const RationalTable& lambda, std::uint64_t trials, std::uint64_t seed,
                                   unsigned workers = 0);

// n^exponent ln n
double log_scale(int n, double exponent);

nlohmann::json to_json(const NuGammaReport& r);
nlohmann::json to_json(const KappaGammaReport& r);
nlohmann::json to_json(const ConcentrationReport& r);

} // namespace aclab
