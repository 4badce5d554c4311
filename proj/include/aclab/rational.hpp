#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace aclab {

using Rational = mpq_class;
using BigInt = mpz_class;

Rational rational_pow(const Rational& base, unsigned exponent);
Rational parse_rational(std::string_view text);   // "3", "-7/8", "0.25"
std::string to_string(const Rational& q);        // canonical "num/den" or "num"
double to_double(const Rational& q);

// Decimal rendering with `digits` significant digits, rounded half away from
// zero from the exact value. Same layout as printf("%#.*g"): fixed notation for
// decimal exponents in [-4, digits), scientific otherwise.
std::string format_decimal(const Rational& q, int digits = 12);

// An edge probability as a reduced fraction in [0, 1]. Endpoints are admitted.
class RationalProb {
public:
    RationalProb() = default;
    RationalProb(std::int64_t numerator, std::int64_t denominator);

    static RationalProb parse(std::string_view text);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    Rational value() const;
    Rational complement() const;
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    bool is_zero() const noexcept { return num_ == 0; }
    bool is_one() const noexcept { return num_ == den_; }
    std::string to_string() const;

    friend bool operator==(const RationalProb&, const RationalProb&) = default;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace aclab
