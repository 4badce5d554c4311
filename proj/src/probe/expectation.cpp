#include "aclab/expectation.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>

#include "aclab/counting.hpp"
#include "aclab/errors.hpp"

namespace aclab {

namespace {

struct Partition {
    std::vector<std::uint32_t> blocks;
    std::int64_t coefficient = 1;   // prod over blocks of (-1)^(|B|-1) (|B|-1)!
};

double bell_number(int k)
{
    std::vector<double> row{1.0};
    for (int i = 0; i < k; ++i) {
        std::vector<double> next{row.back()};
        for (double x : row) next.push_back(next.back() + x);
        row = std::move(next);
    }
    return row.front();
}

const std::vector<Partition>& partitions_of(int k)
{
    static std::mutex guard;
    static std::map<int, std::vector<Partition>> cache;
    std::lock_guard lock(guard);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    std::vector<Partition> out;
    std::vector<std::uint32_t> blocks;
    auto rec = [&](auto&& self, int e) -> void {
        if (e == k) {
            Partition part{blocks, 1};
            for (std::uint32_t b : blocks) {
                const int s = std::popcount(b);
                std::int64_t f = 1;
                for (int q = 2; q < s; ++q) f *= q;
                part.coefficient *= (s % 2 == 1) ? f : -f;
            }
            out.push_back(std::move(part));
            return;
        }
        // by index: the recursion below may reallocate `blocks`
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            blocks[i] |= 1u << e;
            self(self, e + 1);
            blocks[i] &= ~(1u << e);
        }
        blocks.push_back(1u << e);
        self(self, e + 1);
        blocks.pop_back();
    };
    rec(rec, 0);
    return cache.emplace(k, std::move(out)).first->second;
}

BigInt to_big(__int128 v)
{
    const bool neg = v < 0;
    unsigned __int128 m = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    BigInt hi = static_cast<unsigned long>(m >> 64);
    BigInt out = hi * BigInt("18446744073709551616") + BigInt(static_cast<unsigned long>(m));
    return neg ? BigInt(-out) : out;
}

} // namespace

RationalTable expected_copies(const ColourSystem& sys, const PatternGraph& H, const RationalProb& p,
                              const CopyQuery& query)
{
    const int h = H.h();
    const int g = sys.g();
    const int N = sys.order();
    check_count_capacity(H, N);
    RationalTable out(sys.params().shape(), Rational(0));
    const std::size_t vol = out.size();

    std::vector<int> pin(static_cast<std::size_t>(h), -1);
    for (const auto& [x, v] : query.pins) {
        if (x < 0 || x >= h || v < 0 || v >= N) throw ValidationError("pin out of range");
        if (pin[static_cast<std::size_t>(x)] >= 0) throw ValidationError("H vertex pinned twice");
        for (int w : pin)
            if (w == v) return out;   // two H vertices on one vertex: no injective placement
        pin[static_cast<std::size_t>(x)] = v;
    }
    if (query.forced) {
        const auto [a, b] = *query.forced;
        if (a < 0 || b < 0 || a >= N || b >= N || sys.is_coloured(a) || !sys.is_coloured(b))
            throw ValidationError("forced pair must be (uncoloured, coloured)");
    }

    // nbr[c * (tmax+1) + s]: uncoloured vertices joined to coloured c in shade s.
    int tmax = 1;
    for (int t : sys.params().t) tmax = std::max(tmax, t);
    std::vector<VertexSet> nbr(static_cast<std::size_t>(N * (tmax + 1)), VertexSet(N));
    for (const auto& e : sys.edges()) {
        const bool cu = sys.is_coloured(e.u), cv = sys.is_coloured(e.v);
        if (cu == cv) continue;
        const int c = cu ? e.u : e.v, u = cu ? e.v : e.u;
        nbr[static_cast<std::size_t>(c * (tmax + 1) + e.shade)].insert(u);
    }
    VertexSet U(N);
    for (int u : sys.uncoloured()) U.insert(u);

    std::vector<ShadeTuple> tuples(vol);
    for (std::size_t f = 0; f < vol; ++f) tuples[f] = out.tuple_at(f);
    const std::uint32_t all_colours = g >= 32 ? ~0u : (1u << g) - 1;

    // Upper bound on the work: every partial injection of V(H) into the
    // coloured vertices, times the per-tuple inclusion-exclusion.
    {
        const double C = static_cast<double>(sys.coloured_vertices().size());
        double bound = 0.0, binom = 1.0, falling = 1.0;
        for (int k = 0; k <= h; ++k) {
            bound += binom * falling * static_cast<double>(vol) *
                     (bell_number(h - k) + std::ldexp(1.0, h - k));
            binom = binom * (h - k) / (k + 1);
            falling *= std::max(0.0, C - k);
        }
        if (bound > static_cast<double>(kExpectationBudget)) {
            char msg[128];
            std::snprintf(msg, sizeof msg, "expectation enumeration needs up to %.3g terms, budget is 1e8", bound);
            throw CapacityError(msg);
        }
    }

    std::vector<std::vector<__int128>> tally(static_cast<std::size_t>(H.e() + 1), std::vector<__int128>(vol, 0));
    std::vector<int> phi(static_cast<std::size_t>(h), -1);
    std::vector<std::uint8_t> used(static_cast<std::size_t>(N), 0);

    auto leaf = [&]() {
        std::uint32_t colours = 0;
        std::vector<int> Y;
        std::uint32_t ymask = 0;
        for (int x = 0; x < h; ++x) {
            const int c = phi[static_cast<std::size_t>(x)];
            if (c >= 0) colours |= 1u << (sys.colour(c) - 1);
            else {
                Y.push_back(x);
                ymask |= 1u << x;
            }
        }
        if (colours != all_colours) return;
        const int k = static_cast<int>(Y.size());
        const auto& parts = partitions_of(k);

        int exponent = H.edges_within(ymask);
        if (query.random_top)
            for (int y : Y)
                for (int x = 0; x < h; ++x) {
                    const int c = phi[static_cast<std::size_t>(x)];
                    if (c >= 0 && H.adjacent(x, y) && sys.colour(c) == g) ++exponent;
                }

        std::vector<VertexSet> A(static_cast<std::size_t>(k), VertexSet(N));
        std::vector<VertexSet> inter(std::size_t{1} << k, VertexSet(N));
        std::vector<std::int64_t> size(std::size_t{1} << k, 0);
        for (std::size_t f = 0; f < vol; ++f) {
            const ShadeTuple& j = tuples[f];
            bool ok = true;
            for (const auto& [a, b] : H.edges()) {
                const int ca = phi[static_cast<std::size_t>(a)], cb = phi[static_cast<std::size_t>(b)];
                if (ca < 0 || cb < 0) continue;
                const int col = std::min(sys.colour(ca), sys.colour(cb));
                if (!((sys.shades_between(ca, cb, col) >> (j[static_cast<std::size_t>(col - 1)] - 1)) & 1u)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            for (int q = 0; q < k; ++q) {
                const int y = Y[static_cast<std::size_t>(q)];
                VertexSet& s = A[static_cast<std::size_t>(q)];
                const int py = pin[static_cast<std::size_t>(y)];
                if (py >= 0) {
                    s = VertexSet(N);
                    if (U.contains(py)) s.insert(py);
                } else {
                    s = U;
                }
                for (int x = 0; x < h; ++x) {
                    const int c = phi[static_cast<std::size_t>(x)];
                    if (c < 0 || !H.adjacent(x, y)) continue;
                    const int col = sys.colour(c);
                    if (query.random_top && col == g) continue;
                    if (query.forced && py == query.forced->first && c == query.forced->second) continue;
                    s &= nbr[static_cast<std::size_t>(c * (tmax + 1) + j[static_cast<std::size_t>(col - 1)])];
                }
            }
            inter[0] = U;
            size[0] = 0;
            for (std::uint32_t m = 1; m < (1u << k); ++m) {
                const int low = std::countr_zero(m);
                inter[m] = inter[m & (m - 1)];
                if ((m & (m - 1)) == 0) inter[m] = A[static_cast<std::size_t>(low)];
                else inter[m] &= A[static_cast<std::size_t>(low)];
                size[m] = inter[m].size();
            }
            __int128 count = 0;
            for (const auto& part : parts) {
                __int128 term = part.coefficient;
                for (std::uint32_t b : part.blocks) {
                    term *= size[b];
                    if (term == 0) break;
                }
                count += term;
            }
            tally[static_cast<std::size_t>(exponent)][f] += count;
        }
    };

    auto place = [&](auto&& self, int x) -> void {
        if (x == h) {
            leaf();
            return;
        }
        const int py = pin[static_cast<std::size_t>(x)];
        if (py >= 0) {
            if (sys.is_coloured(py)) {
                if (used[static_cast<std::size_t>(py)]) return;
                used[static_cast<std::size_t>(py)] = 1;
                phi[static_cast<std::size_t>(x)] = py;
                self(self, x + 1);
                used[static_cast<std::size_t>(py)] = 0;
            } else {
                phi[static_cast<std::size_t>(x)] = -1;
                self(self, x + 1);
            }
            return;
        }
        phi[static_cast<std::size_t>(x)] = -1;
        self(self, x + 1);
        for (int c : sys.coloured_vertices()) {
            if (used[static_cast<std::size_t>(c)]) continue;
            bool pinned_elsewhere = false;
            for (int w : pin) pinned_elsewhere = pinned_elsewhere || w == c;
            if (pinned_elsewhere) continue;
            used[static_cast<std::size_t>(c)] = 1;
            phi[static_cast<std::size_t>(x)] = c;
            self(self, x + 1);
            used[static_cast<std::size_t>(c)] = 0;
        }
        phi[static_cast<std::size_t>(x)] = -1;
    };
    place(place, 0);

    const Rational pv = p.value();
    for (std::size_t ex = 0; ex < tally.size(); ++ex) {
        const Rational w = rational_pow(pv, static_cast<unsigned>(ex));
        for (std::size_t f = 0; f < vol; ++f)
            if (tally[ex][f] != 0) out[f] += w * Rational(to_big(tally[ex][f]));
    }
    return out;
}

RationalTable exact_mu(const RestrictedColourSystem& rcs, const Extension& S, const PatternGraph& H,
                       const RationalProb& p)
{
    return expected_copies(apply_extension(rcs, S), H, p);
}

RationalTable exact_mu_averaged(const RestrictedColourSystem& rcs, const PatternGraph& H, const RationalProb& p)
{
    CopyQuery q;
    q.random_top = true;
    return expected_copies(rcs.system(), H, p, q);
}

RationalTable exact_nu(const RestrictedColourSystem& rcs, const Extension& S, const PatternGraph& H,
                       const RationalProb& p, int u, int v)
{
    const auto& cs = rcs.system();
    if (u < 0 || u >= cs.order() || cs.is_coloured(u)) throw ValidationError("nu needs an uncoloured vertex u");
    if (v < 0 || v >= cs.order() || cs.colour(v) != cs.g()) throw ValidationError("nu needs a colour-g vertex v");
    const ColourSystem sys = apply_extension(rcs, S);
    RationalTable out(cs.params().shape(), Rational(0));
    for (const auto& [a, b] : H.edges())
        for (const auto& [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
            CopyQuery q;
            q.pins = {{x, u}, {y, v}};
            q.forced = std::pair{u, v};
            const RationalTable part = expected_copies(sys, H, p, q);
            for (std::size_t f = 0; f < out.size(); ++f) out[f] += part[f];
        }
    return out;
}

} // namespace aclab
