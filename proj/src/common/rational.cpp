#include "aclab/rational.hpp"

#include <cstdio>
#include <numeric>
#include <string>

#include "aclab/errors.hpp"

namespace aclab {

Rational rational_pow(const Rational& base, unsigned exponent)
{
    BigInt num;
    BigInt den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
    Rational out(num, den);
    out.canonicalize();
    return out;
}

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    if (s.empty()) throw ValidationError("empty rational literal");
    auto dot = s.find('.');
    try {
        if (dot != std::string::npos) {
            if (s.find('/') != std::string::npos) throw ValidationError("malformed rational: " + s);
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            std::size_t frac = s.size() - dot - 1;
            if (digits.empty() || digits == "-" || digits == "+") throw ValidationError("malformed rational: " + s);
            BigInt num(digits, 10);
            BigInt den = 1;
            for (std::size_t i = 0; i < frac; ++i) den *= 10;
            Rational out(num, den);
            out.canonicalize();
            return out;
        }
        Rational out(s, 10);
        if (out.get_den() == 0) throw ValidationError("zero denominator: " + s);
        out.canonicalize();
        return out;
    } catch (const std::invalid_argument&) {
        throw ValidationError("malformed rational: " + s);
    }
}

std::string to_string(const Rational& q) { return q.get_str(10); }

double to_double(const Rational& q) { return q.get_d(); }

std::string format_decimal(const Rational& q, int digits)
{
    if (digits < 1) digits = 1;
    if (q == 0) {
        std::string out = "0.";
        out.append(static_cast<std::size_t>(digits - 1), '0');
        if (digits == 1) out = "0.";
        return out;
    }
    const bool negative = q < 0;
    Rational mag = abs(q);

    // Find exponent e with 10^e <= mag < 10^(e+1).
    long e = static_cast<long>(mpz_sizeinbase(mag.get_num_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(mag.get_den_mpz_t(), 10));
    auto pow10 = [](long k) {
        BigInt r;
        mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
        return r;
    };
    auto scaled_by = [&](long k) {
        // mag * 10^k
        Rational s = mag;
        if (k >= 0) s *= Rational(pow10(k));
        else s /= Rational(pow10(k));
        return s;
    };
    while (scaled_by(-e) >= 10) ++e;
    while (scaled_by(-e) < 1) --e;

    // Round mag * 10^(digits-1-e) half away from zero.
    Rational scaled = scaled_by(digits - 1 - e);
    BigInt twice = (scaled.get_num() * 2 + scaled.get_den()) / (scaled.get_den() * 2);
    BigInt mantissa = twice;
    if (mantissa == pow10(digits)) {
        mantissa = pow10(digits - 1);
        ++e;
    }
    std::string m = mantissa.get_str(10);

    std::string out = negative ? "-" : "";
    if (e >= -4 && e < digits) {
        if (e >= 0) {
            out += m.substr(0, static_cast<std::size_t>(e + 1));
            out += '.';
            out += m.substr(static_cast<std::size_t>(e + 1));
        } else {
            out += "0.";
            out.append(static_cast<std::size_t>(-e - 1), '0');
            out += m;
        }
    } else {
        out += m.substr(0, 1);
        out += '.';
        out += m.substr(1);
        char buf[32];
        std::snprintf(buf, sizeof buf, "e%c%02ld", e < 0 ? '-' : '+', e < 0 ? -e : e);
        out += buf;
    }
    return out;
}

RationalProb::RationalProb(std::int64_t numerator, std::int64_t denominator)
{
    if (denominator <= 0) throw ValidationError("probability denominator must be positive");
    if (numerator < 0 || numerator > denominator)
        throw ValidationError("probability must lie in [0, 1]");
    std::int64_t g = std::gcd(numerator, denominator);
    if (g == 0) g = 1;
    num_ = numerator / g;
    den_ = denominator / g;
}

RationalProb RationalProb::parse(std::string_view text)
{
    Rational q = parse_rational(text);
    if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p())
        throw ValidationError("probability fraction exceeds 64-bit range: " + std::string(text));
    return RationalProb(q.get_num().get_si(), q.get_den().get_si());
}

Rational RationalProb::value() const
{
    Rational q(static_cast<long>(num_), static_cast<unsigned long>(den_));
    q.canonicalize();
    return q;
}

Rational RationalProb::complement() const { return Rational(1) - value(); }

std::string RationalProb::to_string() const
{
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

} // namespace aclab
