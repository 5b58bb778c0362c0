#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "betadyn/basis.hpp"
#include "betadyn/errors.hpp"
#include "betadyn/expansion.hpp"
#include "betadyn/functions.hpp"
#include "betadyn/real.hpp"

namespace betadyn {

/// One index n at which every inequality of the target set held.
struct HitRecord {
    std::size_t n = 0;
    double distance = 0.0;
    double threshold = 0.0;
    bool two_lines = false;
    double distance2 = 0.0;
    double threshold2 = 0.0;

    bool operator==(const HitRecord&) const = default;
};

namespace detail {

template <class Real>
Real abs_diff(const Real& a, const Real& b) {
    return a < b ? Real(b - a) : Real(a - b);
}

// Strict comparison dist < thr carried out in the backend's arithmetic. A
// threshold that underflowed to 0 can never be beaten.
template <class Real>
bool strictly_below(const Real& dist, double thr) {
    if (!(thr > 0.0)) return false;
    return dist < Real(thr);
}

inline double pow_threshold(double log_beta, std::size_t n, double tau) {
    return std::exp(-static_cast<double>(n) * tau * log_beta);
}

template <class Real>
void check_point(const Real& v) {
    check_unit_interval(v);
}

}  // namespace detail

/// Indices n <= n_max with |T^n x - f(x)| < phi(n). A constant target gives
/// the shrinking-target set, the identity the recurrence set.
template <class Real>
std::vector<HitRecord> hits_1d(const BetaBasis<Real>& basis, const Real& x, const LipschitzMap1D& target,
                               const RateFunction& phi, std::size_t n_max) {
    detail::check_point(x);
    if (n_max == 0) throw DomainError("n_max must be >= 1");
    const Real fx = target(x);
    std::vector<HitRecord> out;
    Real cur = x;
    for (std::size_t n = 1; n <= n_max; ++n) {
        cur = t_apply(basis, cur);
        const Real dist = detail::abs_diff(cur, fx);
        const double thr = phi(n);
        if (detail::strictly_below(dist, thr)) out.push_back({n, to_double(dist), thr});
    }
    return out;
}

/// Indices with |T^n x - g(x, y)| < phi(n).
template <class Real>
std::vector<HitRecord> hits_inhom_planar(const BetaBasis<Real>& basis, const Real& x, const Real& y,
                                         const LipschitzMap2D& g, const RateFunction& phi, std::size_t n_max) {
    detail::check_point(x);
    detail::check_point(y);
    if (n_max == 0) throw DomainError("n_max must be >= 1");
    const Real gxy = g(x, y);
    std::vector<HitRecord> out;
    Real cur = x;
    for (std::size_t n = 1; n <= n_max; ++n) {
        cur = t_apply(basis, cur);
        const Real dist = detail::abs_diff(cur, gxy);
        const double thr = phi(n);
        if (detail::strictly_below(dist, thr)) out.push_back({n, to_double(dist), thr});
    }
    return out;
}

/// A note when the pair of bases is given in the opposite order to the one
/// the dimension formula assumes (beta2 >= beta1). Scans still run.
inline std::optional<std::string> simultaneous_order_warning(double beta1, double beta2) {
    if (beta2 < beta1) {
        return "beta2 = " + detail::fmt(beta2) + " < beta1 = " + detail::fmt(beta1) +
               "; the dimension formula is stated for beta2 >= beta1";
    }
    return std::nullopt;
}

namespace detail {

template <class Real>
std::vector<HitRecord> simultaneous_scan(const BetaBasis<Real>& b1, const BetaBasis<Real>& b2, const Real& x,
                                         const Real& y, const Real& t1, const Real& t2, const TauFunction& tau1,
                                         const TauFunction& tau2, std::size_t n_max) {
    const double e1 = tau1(to_double(x));
    const double e2 = tau2(to_double(y));
    if (!(e1 > 0.0) || !(e2 > 0.0)) throw DomainError("tau must be positive");
    std::vector<HitRecord> out;
    Real cx = x, cy = y;
    for (std::size_t n = 1; n <= n_max; ++n) {
        cx = t_apply(b1, cx);
        cy = t_apply(b2, cy);
        const double thr1 = pow_threshold(b1.log_beta(), n, e1);
        const double thr2 = pow_threshold(b2.log_beta(), n, e2);
        const Real d1 = abs_diff(cx, t1);
        const Real d2 = abs_diff(cy, t2);
        if (strictly_below(d1, thr1) && strictly_below(d2, thr2)) {
            out.push_back({n, to_double(d1), thr1, true, to_double(d2), thr2});
        }
    }
    return out;
}

}  // namespace detail

/// Indices where both |T1^n x - f1(x)| < beta1^(-n tau1(x)) and
/// |T2^n y - f2(y)| < beta2^(-n tau2(y)) hold.
template <class Real>
std::vector<HitRecord> hits_simultaneous(const BetaBasis<Real>& basis1, const BetaBasis<Real>& basis2, const Real& x,
                                         const Real& y, const LipschitzMap1D& f1, const LipschitzMap1D& f2,
                                         const TauFunction& tau1, const TauFunction& tau2, std::size_t n_max) {
    detail::check_point(x);
    detail::check_point(y);
    if (n_max == 0) throw DomainError("n_max must be >= 1");
    return detail::simultaneous_scan(basis1, basis2, x, y, f1(x), f2(y), tau1, tau2, n_max);
}

/// As hits_simultaneous with targets depending on both coordinates.
template <class Real>
std::vector<HitRecord> hits_simultaneous_inhom(const BetaBasis<Real>& basis1, const BetaBasis<Real>& basis2,
                                               const Real& x, const Real& y, const LipschitzMap2D& g1,
                                               const LipschitzMap2D& g2, const TauFunction& tau1,
                                               const TauFunction& tau2, std::size_t n_max) {
    detail::check_point(x);
    detail::check_point(y);
    if (n_max == 0) throw DomainError("n_max must be >= 1");
    return detail::simultaneous_scan(basis1, basis2, x, y, g1(x, y), g2(x, y), tau1, tau2, n_max);
}

}  // namespace betadyn
