#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "betadyn/basis.hpp"
#include "betadyn/errors.hpp"
#include "betadyn/word.hpp"

namespace betadyn {

/// Absolute tolerance of the float backend: beta*x within this distance of an
/// admissible integer digit k is treated as exactly k, so algebraic identities
/// such as beta * (1/beta) = 1 survive rounding.
inline constexpr double kFloatSnap = 1e-12;

template <class Real>
struct TransformStep {
    int digit;
    Real next;
};

namespace detail {

template <class Real>
void check_unit_interval(const Real& x) {
    if (x < Real(0) || x >= Real(1)) {
        const double xv = to_double(x);
        if (x == Real(1)) {
            throw DomainError("x = 1 is outside the domain [0,1); cylinders are half-open so 1 is excluded");
        }
        throw DomainError("x = " + std::to_string(xv) + " is outside the domain [0,1)");
    }
}

}  // namespace detail

/// One application of T_beta together with the digit it emits.
template <class Real>
TransformStep<Real> t_step(const BetaBasis<Real>& basis, const Real& x) {
    detail::check_unit_interval(x);
    if constexpr (RealTraits<Real>::exact) {
        Rational y = basis.beta() * x;
        const std::int64_t d = RealTraits<Rational>::floor_int(y);
        return {static_cast<int>(d), Rational(y - Rational(d))};
    } else {
        const double y = basis.beta() * x;
        const double nearest = std::round(y);
        if (nearest >= 1.0 && nearest <= basis.max_digit() && std::fabs(y - nearest) <= kFloatSnap) {
            return {static_cast<int>(nearest), 0.0};
        }
        int d = static_cast<int>(std::floor(y));
        double rem = y - d;
        if (d > basis.max_digit()) {
            // beta*x rounded up to beta itself for x one ulp below 1
            d = basis.max_digit();
            rem = std::nextafter(1.0, 0.0);
        }
        return {d, rem};
    }
}

/// T_beta(x) = beta*x - floor(beta*x) on [0,1).
template <class Real>
Real t_apply(const BetaBasis<Real>& basis, const Real& x) {
    return t_step(basis, x).next;
}

/// Orbit (x, Tx, ..., T^n x).
template <class Real>
std::vector<Real> t_iterate(const BetaBasis<Real>& basis, const Real& x, std::size_t n) {
    if (n == 0) throw DomainError("orbit length n must be >= 1");
    std::vector<Real> orbit;
    orbit.reserve(n + 1);
    orbit.push_back(x);
    for (std::size_t k = 0; k < n; ++k) orbit.push_back(t_apply(basis, orbit.back()));
    return orbit;
}

/// First n digits of the beta-expansion, eps_k = floor(beta * T^{k-1} x).
template <class Real>
Word digits(const BetaBasis<Real>& basis, const Real& x, std::size_t n) {
    if (n == 0) throw DomainError("number of digits n must be >= 1");
    Word w;
    w.digits.reserve(n);
    Real cur = x;
    for (std::size_t k = 0; k < n; ++k) {
        auto step = t_step(basis, cur);
        w.digits.push_back(step.digit);
        cur = std::move(step.next);
    }
    return w;
}

}  // namespace betadyn
