#include "aclab/lattice.hpp"

#include <cmath>

#include "aclab/errors.hpp"
#include "aclab/span.hpp"

namespace aclab {

namespace {

// Gauss-Jordan inverse of the matrix whose columns are the basis vectors.
std::vector<std::vector<Rational>> inverse_of_columns(const std::vector<std::vector<Rational>>& basis)
{
    const std::size_t d = basis.size();
    std::vector<std::vector<Rational>> a(d, std::vector<Rational>(2 * d));
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) a[r][c] = basis[c][r];
        a[r][d + r] = 1;
    }
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t piv = c;
        while (piv < d && a[piv][c] == 0) ++piv;
        if (piv == d) throw ValidationError("lattice basis is linearly dependent");
        std::swap(a[c], a[piv]);
        const Rational lead = a[c][c];
        for (auto& x : a[c]) x /= lead;
        for (std::size_t r = 0; r < d; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const Rational f = a[r][c];
            for (std::size_t k = 0; k < 2 * d; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<std::vector<Rational>> inv(d, std::vector<Rational>(d));
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) inv[r][c] = a[r][d + c];
    return inv;
}

BigInt floor_of(const Rational& q)
{
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

BigInt ceil_of(const Rational& q)
{
    BigInt out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

} // namespace

LatticeCount lattice_count(const std::vector<std::vector<Rational>>& basis, const std::vector<Rational>& target,
                           const Rational& z)
{
    const std::size_t d = basis.size();
    if (d == 0) throw ValidationError("lattice basis is empty");
    for (const auto& v : basis)
        if (v.size() != d) throw ValidationError("lattice basis must hold d vectors of length d");
    if (target.size() != d) throw ValidationError("lattice target has wrong length");
    if (z < 1) throw ValidationError("lattice radius z must be at least 1");
    if (exact_rank(basis) != static_cast<int>(d)) throw ValidationError("lattice basis is linearly dependent");

    const auto inv = inverse_of_columns(basis);
    LatticeCount out;
    out.low.resize(d);
    out.high.resize(d);
    double volume = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
        Rational centre = 0, spread = 0;
        for (std::size_t k = 0; k < d; ++k) {
            centre += inv[i][k] * target[k];
            spread += abs(inv[i][k]);
        }
        const BigInt lo = ceil_of(centre - z * spread);
        const BigInt hi = floor_of(centre + z * spread);
        if (!lo.fits_slong_p() || !hi.fits_slong_p()) throw CapacityError("lattice box exceeds 10^7 points");
        out.low[i] = lo.get_si();
        out.high[i] = hi.get_si();
        if (out.high[i] < out.low[i]) return out;
        volume *= static_cast<double>(out.high[i] - out.low[i] + 1);
        if (volume > static_cast<double>(kLatticeBoxLimit))
            throw CapacityError("lattice box exceeds 10^7 points");
    }
    out.box_points = static_cast<std::uint64_t>(volume);

    // Scale everything to integers: || sum t_i V_i - X ||_inf < Z with common denominator D.
    BigInt D = z.get_den();
    for (const auto& v : basis)
        for (const auto& q : v) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), q.get_den_mpz_t());
    for (const auto& q : target) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), q.get_den_mpz_t());
    auto scaled = [&](const Rational& q) { return BigInt(q.get_num() * (D / q.get_den())); };
    std::vector<std::vector<BigInt>> V(d, std::vector<BigInt>(d));
    std::vector<BigInt> X(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < d; ++k) V[i][k] = scaled(basis[i][k]);
        X[i] = scaled(target[i]);
    }
    const BigInt Z = scaled(z);

    std::vector<std::int64_t> t = out.low;
    std::vector<BigInt> acc(d);
    for (;;) {
        bool inside = true;
        for (std::size_t k = 0; k < d && inside; ++k) {
            acc[k] = -X[k];
            for (std::size_t i = 0; i < d; ++i) acc[k] += V[i][k] * t[i];
            inside = abs(acc[k]) < Z;
        }
        if (inside) ++out.count;
        std::size_t i = 0;
        while (i < d && t[i] == out.high[i]) {
            t[i] = out.low[i];
            ++i;
        }
        if (i == d) break;
        ++t[i];
    }
    return out;
}

} // namespace aclab
