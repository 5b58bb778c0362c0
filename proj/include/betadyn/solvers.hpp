#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "betadyn/basis.hpp"
#include "betadyn/cylinders.hpp"
#include "betadyn/errors.hpp"
#include "betadyn/functions.hpp"
#include "betadyn/real.hpp"
#include "betadyn/word.hpp"

namespace betadyn {

inline constexpr int kMaxBisectionSteps = 200;

/// Closed or empty interval of points.
template <class Real>
struct PointInterval {
    bool empty = true;
    Real lo{};
    Real hi{};

    Real length() const { return empty ? Real(0) : Real(hi - lo); }
    bool contains(const Real& x) const { return !empty && lo <= x && x <= hi; }
};

/// Bracketing of {x in I_n(w) : |T^n x - f(x)| < beta^(-n tau(x))}: the outer
/// interval uses the minimum of tau and contains every hitting point, the
/// inner one uses the maximum and contains only hitting points.
template <class Real>
struct HitInterval {
    Real cylinder_left{};
    Real cylinder_right{};
    std::size_t order = 0;
    double outer_radius = 0.0;  // beta^(-n theta)
    double inner_radius = 0.0;  // beta^(-n kappa)
    PointInterval<Real> outer;
    PointInterval<Real> inner;
};

namespace detail {

// On a cylinder with left endpoint a, T^n x = beta^n (x - a), so the hit
// residual is r(x) = beta^n (x - a) - f(x).
template <class Real>
struct BranchResidual {
    Real scale;  // beta^n
    Real left;
    const LipschitzMap1D* f;

    Real operator()(const Real& x) const { return Real(scale * (x - left)) - (*f)(x); }
};

template <class Real>
Real power(const Real& beta, std::size_t n) {
    Real out(1);
    for (std::size_t i = 0; i < n; ++i) out *= beta;
    return out;
}

// Solves r(x) = level on [lo, hi] for increasing r.
template <class Real>
Real bisect_level(const BranchResidual<Real>& r, Real lo, Real hi, const Real& level, const Real& tol) {
    for (int it = 0; it < kMaxBisectionSteps && Real(hi - lo) > tol; ++it) {
        Real mid = Real(lo + hi) / 2;
        if (r(mid) < level) lo = mid; else hi = mid;
    }
    return Real(lo + hi) / 2;
}

template <class Real>
void check_expansion_rate(const BetaBasis<Real>& basis, std::size_t n, double needed, const char* what) {
    const double growth = std::pow(basis.value(), static_cast<double>(n));
    if (!(growth > needed)) {
        throw PreconditionError(std::string(what) + ": beta^n = " + detail::fmt(growth) +
                                " must exceed " + detail::fmt(needed));
    }
}

}  // namespace detail

/// A point x in the full cylinder I_n(w) with |T^n x - f(x)| < eps, found by
/// bisection on the increasing residual beta^n (x - a_w) - f(x). When the
/// root sits on the right closure point, an interior point just left of it is
/// returned instead.
template <class Real>
Real solve_target_point(const BetaBasis<Real>& basis, const Word& word, const LipschitzMap1D& target, double eps) {
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    if (!is_full(basis, word)) throw PreconditionError("word " + word.to_string() + " is not full");
    const std::size_t n = word.order();
    detail::check_expansion_rate(basis, n, target.lipschitz_bound(), "solve_target_point");

    const Real left = detail::left_endpoint(basis, word.digits);
    const Real width = basis.inverse_power(n);
    const Real right = left + width;
    const detail::BranchResidual<Real> r{detail::power(basis.beta(), n), left, &target};
    const Real tol = Real(width * Real(1e-12));
    const Real eps_r(eps);

    auto abs_r = [&](const Real& x) {
        Real v = r(x);
        return v < Real(0) ? Real(-v) : v;
    };

    Real lo = left, hi = right;
    for (int it = 0; it < kMaxBisectionSteps; ++it) {
        const Real mid = Real(lo + hi) / 2;
        if (Real(hi - lo) <= tol && abs_r(mid) < eps_r) break;
        if (r(mid) < Real(0)) lo = mid; else hi = mid;
    }
    Real x = Real(lo + hi) / 2;
    if (abs_r(lo) < abs_r(x)) x = lo;
    if (abs_r(hi) < abs_r(x)) x = hi;

    if (x >= right) x = right;
    if (x == right) {
        Real offset = Real(width * Real(1e-9));
        x = right - offset;
        for (int it = 0; it < kMaxBisectionSteps && !(abs_r(x) < eps_r); ++it) {
            offset /= 2;
            x = right - offset;
        }
    }
    if (!(abs_r(x) < eps_r) || x < left || x >= right) {
        const double resolution = std::pow(basis.value(), static_cast<double>(n)) * std::numeric_limits<double>::epsilon();
        if (!RealTraits<Real>::exact && eps < 8.0 * resolution) {
            throw RangeError("eps = " + detail::fmt(eps) + " is below the float resolution " + detail::fmt(resolution) +
                             " of beta^n (x - a_w) at order " + std::to_string(n) + "; use the exact backend");
        }
        throw Error("internal error: bisection failed to reach residual " + detail::fmt(eps) + " on word " +
                    word.to_string());
    }
    return x;
}

/// Outer (theta) and inner (kappa) bracketing intervals of the hit set on the
/// cylinder of `word`, found by bisection on the monotone boundary residuals
/// beta^n (x - a_w) - f(x) = -/+ radius. The outer length is at most
/// 4 beta^(-n (1 + theta)) once beta^n > 2L.
template <class Real>
HitInterval<Real> approximate_hit_interval(const BetaBasis<Real>& basis, const Word& word,
                                           const LipschitzMap1D& target, const TauFunction& tau) {
    const CylinderInterval<Real> cyl = cylinder_interval(basis, word);
    const std::size_t n = word.order();
    detail::check_expansion_rate(basis, n, 2.0 * target.lipschitz_bound(), "approximate_hit_interval");
    const TauExtrema ex = tau.extrema();

    HitInterval<Real> out;
    out.cylinder_left = cyl.left;
    out.cylinder_right = cyl.right;
    out.order = n;
    out.outer_radius = std::exp(-static_cast<double>(n) * ex.theta * basis.log_beta());
    out.inner_radius = std::exp(-static_cast<double>(n) * ex.kappa * basis.log_beta());

    const detail::BranchResidual<Real> r{detail::power(basis.beta(), n), cyl.left, &target};
    const Real tol = Real(basis.inverse_power(n) * Real(1e-12));

    // `pad` widens (outer) or narrows (inner) the bisection result by one
    // tolerance so the containment guarantees survive the bisection error.
    auto solve = [&](double radius, const Real& pad) {
        PointInterval<Real> iv;
        if (!(radius > 0.0)) return iv;
        const Real rad(radius);
        const Real r_lo = r(cyl.left), r_hi = r(cyl.right);
        const Real neg = Real(-rad);
        if (!(r_lo < rad) || !(neg < r_hi)) return iv;
        iv.lo = neg < r_lo ? cyl.left : detail::bisect_level(r, cyl.left, cyl.right, neg, tol);
        iv.hi = r_hi < rad ? cyl.right : detail::bisect_level(r, cyl.left, cyl.right, rad, tol);
        iv.lo -= pad;
        iv.hi += pad;
        if (iv.lo < cyl.left) iv.lo = cyl.left;
        if (cyl.right < iv.hi) iv.hi = cyl.right;
        iv.empty = !(iv.lo < iv.hi);
        return iv;
    };
    out.outer = solve(out.outer_radius, tol);
    out.inner = solve(out.inner_radius, Real(-tol));
    return out;
}

/// Smallest n with beta^n > 2L, past which the outer hit interval obeys the
/// 4 beta^(-n (1 + theta)) diameter law.
inline std::size_t diameter_law_order(double beta, double lipschitz) {
    std::size_t n = 1;
    while (!(std::pow(beta, static_cast<double>(n)) > 2.0 * lipschitz)) ++n;
    return n;
}

}  // namespace betadyn
