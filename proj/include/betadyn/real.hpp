#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "betadyn/errors.hpp"

namespace betadyn {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Arithmetic backend description. Every algorithm in the library is written
/// once against this interface and instantiated for `double` (tolerance based)
/// and `Rational` (exact).
template <class Real>
struct RealTraits;

template <>
struct RealTraits<double> {
    static constexpr bool exact = false;
    static constexpr const char* provenance = "float";

    static double to_double(double v) { return v; }
    static double from_double(double v) { return v; }
    static std::int64_t floor_int(double v) { return static_cast<std::int64_t>(std::floor(v)); }
    static double abs(double v) { return std::fabs(v); }
};

template <>
struct RealTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* provenance = "exact";

    static double to_double(const Rational& v) { return v.convert_to<double>(); }
    static Rational from_double(double v) { return Rational(v); }

    static std::int64_t floor_int(const Rational& v) {
        BigInt num = boost::multiprecision::numerator(v);
        const BigInt den = boost::multiprecision::denominator(v);
        BigInt q = num / den;
        if (num < 0 && q * den != num) q -= 1;
        return q.convert_to<std::int64_t>();
    }

    static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
};

template <class Real>
double to_double(const Real& v) {
    return RealTraits<Real>::to_double(v);
}

/// Parses "p/q", a plain integer, or a finite decimal ("1.25", "-0.5") into an
/// exact rational.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&]() -> Rational {
        throw DomainError("cannot parse '" + std::string(text) + "' as an exact rational");
    };
    if (text.empty()) return fail();
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const Rational num = parse_rational(text.substr(0, slash));
        const Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
        return num / den;
    }
    std::string digits;
    bool negative = false;
    std::size_t frac_digits = 0;
    bool seen_point = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (i == 0 && (c == '-' || c == '+')) {
            negative = c == '-';
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_point) ++frac_digits;
        } else {
            return fail();
        }
    }
    if (digits.empty()) return fail();
    // a leading zero would select octal in the BigInt string constructor
    const auto nz = digits.find_first_not_of('0');
    BigInt num(nz == std::string::npos ? std::string("0") : digits.substr(nz));
    BigInt den = 1;
    for (std::size_t i = 0; i < frac_digits; ++i) den *= 10;
    Rational r(num, den);
    return negative ? Rational(-r) : r;
}

}  // namespace betadyn
