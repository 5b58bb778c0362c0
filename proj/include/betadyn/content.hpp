#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "betadyn/basis.hpp"
#include "betadyn/cylinders.hpp"
#include "betadyn/dimension.hpp"
#include "betadyn/errors.hpp"
#include "betadyn/functions.hpp"

namespace betadyn {

/// How the number of order-n words enters a content term.
enum class CountMode {
    Auto,   // exact count up to kExactCountOrder, Renyi upper bound beyond
    Exact,  // always the exact count
    Renyi,  // always beta^(n+1) / (beta - 1)
};

inline constexpr std::size_t kExactCountOrder = 18;

/// ln of one term of a covering sum, with the count regime it used.
struct ContentTerm {
    double log_value = 0.0;
    bool exact_count = false;
};

namespace detail {

inline double log_renyi_count(double log_beta, double beta, std::size_t n) {
    return static_cast<double>(n + 1) * log_beta - std::log(beta - 1.0);
}

// ln(floor(e^L) + 1) without forming e^L once it is huge.
inline double log_floor_plus_one(double L) {
    if (L > 700.0) return L;
    return std::log(std::floor(std::exp(L)) + 1.0);
}

}  // namespace detail

/// Term of the planar covering sum for rate phi at exponent s:
/// C_n * K_n * (9 phi(n) / beta^n)^s with C_n the number of order-n words and
/// K_n = floor(beta^n / phi(n)) + 1. Evaluated in log space.
inline ContentTerm content_terms_thm1(const FloatBasis& basis, const RateFunction& phi, double s, std::size_t n,
                                      CountMode mode = CountMode::Auto) {
    if (n == 0) throw DomainError("n must be >= 1");
    const double lphi = phi.log_value(n);
    if (!(lphi < 0.0)) {
        throw PreconditionError("content terms need phi(n) < 1, got phi(" + std::to_string(n) +
                                ") = " + detail::fmt(std::exp(lphi)));
    }
    const double lb = basis.log_beta();
    const double nd = static_cast<double>(n);
    ContentTerm out;
    const bool exact = mode == CountMode::Exact || (mode == CountMode::Auto && n <= kExactCountOrder);
    double log_count = 0.0;
    if (exact) {
        log_count = std::log(static_cast<double>(count_words(basis, n)));
        out.exact_count = true;
    } else {
        log_count = detail::log_renyi_count(lb, basis.value(), n);
    }
    const double log_k = detail::log_floor_plus_one(nd * lb - lphi);
    out.log_value = log_count + log_k + s * (std::log(9.0) + lphi - nd * lb);
    return out;
}

/// Which of the two candidate expressions of a case a covering sum bounds.
enum class ContentBranch { First = 1, Second = 2 };

/// Term of the covering sum behind one branch of the simultaneous upper bound
/// (constants kept as in the covering argument: squares of side 4 beta^-..,
/// diameter factor 4 sqrt 2). Counts use the Renyi bound.
inline ContentTerm content_terms_thm2(double beta1, double beta2, double theta1, double theta2, SimulCase c,
                                      ContentBranch branch, double s, std::size_t n) {
    detail::check_simultaneous(beta1, beta2, theta1, theta2);
    if (n == 0) throw DomainError("n must be >= 1");
    if (branch != ContentBranch::First && branch != ContentBranch::Second) {
        throw PreconditionError("branch must be 1 or 2");
    }
    const SimulCase actual = classify_simultaneous(beta1, beta2, theta1, theta2);
    if (c != actual) {
        throw PreconditionError("parameters fall in " + case_label(actual) + ", not " + case_label(c));
    }
    const double l1 = std::log(beta1), l2 = std::log(beta2);
    const double lambda = l1 / l2;
    const double nd = static_cast<double>(n);
    const double counts = detail::log_renyi_count(l1, beta1, n) + detail::log_renyi_count(l2, beta2, n);
    const double log_side = std::log(4.0 * std::numbers::sqrt2);
    const double side1 = log_side - nd * (1.0 + theta1) * l1;  // ln(4 sqrt2 beta1^(-n(1+theta1)))
    const double side2 = log_side - nd * (1.0 + theta2) * l2;  // ln(4 sqrt2 beta2^(-n(1+theta2)))

    ContentTerm out;
    const bool second = branch == ContentBranch::Second;
    switch (c) {
        case SimulCase::Case1:
            if (!second) {
                // squares of side 4 beta1^(-n(1+theta1)), each absorbing
                // 8 beta2^(n(1-(1+theta1)lambda)) rectangles
                const double words = nd * l1 - std::log(beta1 - 1.0) + nd * l2 - std::log(beta2 - 1.0);
                out.log_value = words - std::log(8.0) - nd * (1.0 - (1.0 + theta1) * lambda) * l2 + s * side1;
            } else {
                out.log_value = counts + std::log(2.0) + nd * ((1.0 + theta2) - (1.0 + theta1) * lambda) * l2 +
                                s * side2;
            }
            break;
        case SimulCase::Case2:
            if (!second) {
                out.log_value = counts + s * side1;
            } else {
                out.log_value = counts + std::log(2.0) + nd * ((1.0 + theta2) - (1.0 + theta1) * lambda) * l2 +
                                s * side2;
            }
            break;
        case SimulCase::Case3:
            if (!second) {
                out.log_value = counts + s * side2;
            } else {
                out.log_value = counts + std::log(2.0) + nd * ((1.0 + theta1) * lambda - (1.0 + theta2)) * l2 +
                                s * side1;
            }
            break;
    }
    return out;
}

enum class Verdict { Converging, Diverging, Inconclusive };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Converging: return "converging";
        case Verdict::Diverging: return "diverging";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return {};
}

struct ScanSettings {
    std::size_t horizon = 400;           // N
    std::size_t rate_window_min = 32;    // window starts at max(this, N/2)
    std::size_t tail_from = 200;         // tail is the sum over n > tail_from
    double tail_tolerance = 1e-8;
    double blowup = 1e6;
    double rate_tolerance = 1e-4;
};

/// Partial sums of a covering series at one exponent.
struct ContentScan {
    double s = 0.0;
    std::vector<double> log_terms;     // index k holds n = k + 1
    std::vector<double> partial_sums;  // saturates at +inf
    std::vector<double> rates;         // ln(t_{n+1} / t_n), one fewer than terms
    std::vector<char> exact_count;
    double average_rate = 0.0;         // over the stabilisation window
    double tail = 0.0;                 // sum over n > tail_from, geometric extrapolation past N
    Verdict verdict = Verdict::Inconclusive;

    /// First n with partial sum above `threshold`, if any.
    std::optional<std::size_t> first_exceeding(double threshold) const {
        for (std::size_t k = 0; k < partial_sums.size(); ++k) {
            if (partial_sums[k] > threshold) return k + 1;
        }
        return std::nullopt;
    }
};

/// ln t_n for a fixed exponent.
using TermFunction = std::function<ContentTerm(std::size_t n)>;
/// ln t_n as a function of the exponent.
using FamilyFunction = std::function<ContentTerm(double s, std::size_t n)>;

namespace detail {

inline std::size_t window_start(const ScanSettings& cfg) {
    return std::max(cfg.rate_window_min, cfg.horizon / 2);
}

inline double window_rate(const FamilyFunction& fn, double s, const ScanSettings& cfg) {
    const std::size_t n1 = window_start(cfg);
    const std::size_t n2 = cfg.horizon;
    if (n1 >= n2) throw PreconditionError("rate window is empty; raise the horizon");
    return (fn(s, n2).log_value - fn(s, n1).log_value) / static_cast<double>(n2 - n1);
}

}  // namespace detail

/// Terms, partial sums, empirical rates and a verdict for n = 1..N.
inline ContentScan content_scan(const TermFunction& term, double s, const ScanSettings& cfg = {}) {
    if (cfg.horizon < 2) throw DomainError("horizon must be >= 2");
    if (cfg.tail_from >= cfg.horizon) throw DomainError("tail start must lie below the horizon");
    ContentScan out;
    out.s = s;
    double sum = 0.0;
    for (std::size_t n = 1; n <= cfg.horizon; ++n) {
        const ContentTerm t = term(n);
        out.log_terms.push_back(t.log_value);
        out.exact_count.push_back(t.exact_count ? 1 : 0);
        sum += std::exp(t.log_value);
        out.partial_sums.push_back(sum);
    }
    for (std::size_t k = 0; k + 1 < out.log_terms.size(); ++k) {
        out.rates.push_back(out.log_terms[k + 1] - out.log_terms[k]);
    }
    const std::size_t n1 = detail::window_start(cfg);
    const std::size_t n2 = cfg.horizon;
    if (n1 >= n2) throw PreconditionError("rate window is empty; raise the horizon");
    out.average_rate = (out.log_terms[n2 - 1] - out.log_terms[n1 - 1]) / static_cast<double>(n2 - n1);

    double tail = 0.0;
    for (std::size_t n = cfg.tail_from + 1; n <= n2; ++n) tail += std::exp(out.log_terms[n - 1]);
    if (out.average_rate < 0.0) {
        const double r = std::exp(out.average_rate);
        tail += std::exp(out.log_terms[n2 - 1]) * r / (1.0 - r);
    } else {
        tail = std::numeric_limits<double>::infinity();
    }
    out.tail = tail;

    if (out.tail < cfg.tail_tolerance && out.average_rate < -cfg.rate_tolerance) {
        out.verdict = Verdict::Converging;
    } else if (out.partial_sums.back() > cfg.blowup || out.average_rate > cfg.rate_tolerance) {
        out.verdict = Verdict::Diverging;
    } else {
        out.verdict = Verdict::Inconclusive;
    }
    return out;
}

struct CriticalScan {
    double s_star = 0.0;
    double bracket_lo = 0.0, bracket_hi = 0.0;  // final bracket
    double rate_lo = 0.0, rate_hi = 0.0;        // window rates at the initial bracket ends
    double rate_at_star = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Bisection on the stabilised log-rate of a term family for the exponent at
/// which the covering series switches from divergence to convergence.
inline CriticalScan critical_exponent_scan(const FamilyFunction& fn, double s_lo, double s_hi, double tol = 1e-9,
                                           const ScanSettings& cfg = {}) {
    if (!(s_lo < s_hi)) throw DomainError("critical exponent bracket needs s_lo < s_hi");
    CriticalScan out;
    out.rate_lo = detail::window_rate(fn, s_lo, cfg);
    out.rate_hi = detail::window_rate(fn, s_hi, cfg);
    if (!((out.rate_lo > 0.0 && out.rate_hi < 0.0) || (out.rate_lo < 0.0 && out.rate_hi > 0.0))) {
        throw BracketError("no sign change of the log-rate on [" + detail::fmt(s_lo) + ", " + detail::fmt(s_hi) +
                           "]: rates " + detail::fmt(out.rate_lo) + ", " + detail::fmt(out.rate_hi));
    }
    const bool decreasing = out.rate_lo > 0.0;
    double lo = s_lo, hi = s_hi;
    double mid = 0.5 * (lo + hi), rate = 0.0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        rate = detail::window_rate(fn, mid, cfg);
        out.iterations = it + 1;
        if (std::fabs(rate) < tol && hi - lo < 1e-12) break;
        if (rate == 0.0) break;
        if ((rate > 0.0) == decreasing) lo = mid; else hi = mid;
        if (hi - lo < 1e-15) break;
    }
    out.s_star = mid;
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    out.rate_at_star = rate;
    out.converged = std::fabs(rate) < tol;
    return out;
}

/// Term family for the planar shrinking-target covering, with exact counts
/// cached per order.
inline FamilyFunction thm1_family(const FloatBasis& basis, const RateFunction& phi, CountMode mode = CountMode::Auto) {
    auto counts = std::make_shared<std::vector<double>>();
    for (std::size_t n = 1; n <= kExactCountOrder && n <= basis.max_order(); ++n) {
        counts->push_back(std::log(static_cast<double>(count_words(basis, n))));
    }
    return [basis, phi, mode, counts](double s, std::size_t n) {
        const bool exact = mode == CountMode::Exact || (mode == CountMode::Auto && n <= kExactCountOrder);
        if (exact && n <= counts->size()) {
            ContentTerm t = content_terms_thm1(basis, phi, s, n, CountMode::Renyi);
            const double renyi = detail::log_renyi_count(basis.log_beta(), basis.value(), n);
            t.log_value += (*counts)[n - 1] - renyi;
            t.exact_count = true;
            return t;
        }
        return content_terms_thm1(basis, phi, s, n, mode);
    };
}

inline FamilyFunction thm2_family(double beta1, double beta2, double theta1, double theta2, SimulCase c,
                                  ContentBranch branch) {
    return [=](double s, std::size_t n) { return content_terms_thm2(beta1, beta2, theta1, theta2, c, branch, s, n); };
}

inline TermFunction at_exponent(const FamilyFunction& fn, double s) {
    return [fn, s](std::size_t n) { return fn(s, n); };
}

}  // namespace betadyn
