#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "betadyn/errors.hpp"
#include "betadyn/functions.hpp"

namespace betadyn {

/// Value of the liminf exponent alpha of a rate function.
struct AlphaEstimate {
    double value = 0.0;
    bool analytic = false;  // false: finite-horizon heuristic
    std::string provenance() const { return analytic ? "float" : "heuristic"; }
};

/// alpha = liminf log_beta(1/phi(n)) / n. Closed families are exact; a table
/// falls back to the minimum of the ratio over n in [ceil(N/2), N].
inline AlphaEstimate alpha_exponent(const RateFunction& phi, double beta, std::size_t horizon = 64) {
    if (!(beta > 1.0)) throw DomainError("beta must be > 1");
    if (auto a = phi.analytic_alpha(beta)) return {*a, true};
    if (horizon < 16) throw PreconditionError("numeric alpha needs a horizon N >= 16");
    const double lb = std::log(beta);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t n = (horizon + 1) / 2; n <= horizon; ++n) {
        best = std::min(best, -phi.log_value(n) / (lb * static_cast<double>(n)));
    }
    return {std::max(best, 0.0), false};
}

inline void check_alpha(double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be a finite number >= 0");
}

/// 1 / (1 + alpha).
inline double dim_shrinking_target(double alpha) {
    check_alpha(alpha);
    return 1.0 / (1.0 + alpha);
}

/// 1 + 1 / (1 + alpha).
inline double dim_inhom_planar(double alpha) {
    check_alpha(alpha);
    return 1.0 + 1.0 / (1.0 + alpha);
}

enum class SimulCase { Case1 = 1, Case2 = 2, Case3 = 3 };

inline std::string case_label(SimulCase c) { return "case" + std::to_string(static_cast<int>(c)); }

/// A named candidate expression of a dimension formula.
struct BranchValue {
    std::string name;
    double value;
};

struct DimensionReport {
    double value = 0.0;
    std::string branch;  // case1 / case2 / case3 / planar / 1d
    std::vector<BranchValue> branch_values;
    double beta1 = 0.0, beta2 = 0.0, theta1 = 0.0, theta2 = 0.0;
    std::optional<double> alpha;
    double lambda = 0.0;  // log_{beta2} beta1
    std::vector<std::string> notes;
    std::optional<bool> applicable;       // strict hypothesis of the inhomogeneous result
    std::optional<bool> applicable_weak;  // same with non-strict inequalities
    std::string provenance = "float";
};

namespace detail {

inline void check_simultaneous(double beta1, double beta2, double theta1, double theta2) {
    if (!(beta1 > 1.0)) throw DomainError("beta1 must be > 1");
    if (!(beta2 >= beta1)) {
        throw PreconditionError("the simultaneous formula needs beta2 >= beta1, got beta1 = " + fmt(beta1) +
                                ", beta2 = " + fmt(beta2));
    }
    if (!(theta1 > 0.0) || !(theta2 > 0.0)) throw DomainError("theta1 and theta2 must be positive");
}

}  // namespace detail

/// Case of the simultaneous formula. Ties go to the middle case.
inline SimulCase classify_simultaneous(double beta1, double beta2, double theta1, double theta2) {
    const double p = std::pow(beta1, 1.0 + theta1);
    if (p < beta2) return SimulCase::Case1;
    if (p > std::pow(beta2, 1.0 + theta2)) return SimulCase::Case3;
    return SimulCase::Case2;
}

/// The two candidate expressions of a case; the dimension is their minimum.
inline std::pair<BranchValue, BranchValue> simultaneous_branches(SimulCase c, double lambda, double theta1,
                                                             double theta2) {
    const BranchValue second_x{"(2+theta2-theta1*lambda)/(1+theta2)", (2.0 + theta2 - theta1 * lambda) / (1.0 + theta2)};
    switch (c) {
        case SimulCase::Case1:
            return {{"(2+theta1)/(1+theta1)", (2.0 + theta1) / (1.0 + theta1)}, second_x};
        case SimulCase::Case2:
            return {{"(1+lambda)/((1+theta1)*lambda)", (1.0 + lambda) / ((1.0 + theta1) * lambda)}, second_x};
        case SimulCase::Case3:
            return {{"(1+lambda)/(1+theta2)", (1.0 + lambda) / (1.0 + theta2)},
                    {"((2+theta1)*lambda-theta2)/((1+theta1)*lambda)",
                     ((2.0 + theta1) * lambda - theta2) / ((1.0 + theta1) * lambda)}};
    }
    return {second_x, second_x};
}

/// Hausdorff dimension of the simultaneous approximation set with exponent
/// minima theta1, theta2 and bases beta2 >= beta1.
inline DimensionReport dim_simultaneous(double beta1, double beta2, double theta1, double theta2) {
    detail::check_simultaneous(beta1, beta2, theta1, theta2);
    DimensionReport r;
    r.beta1 = beta1;
    r.beta2 = beta2;
    r.theta1 = theta1;
    r.theta2 = theta2;
    r.lambda = std::log(beta1) / std::log(beta2);
    const SimulCase c = classify_simultaneous(beta1, beta2, theta1, theta2);
    r.branch = case_label(c);
    const auto [b1, b2] = simultaneous_branches(c, r.lambda, theta1, theta2);
    r.branch_values = {b1, b2};
    r.value = std::min(b1.value, b2.value);

    const double p = std::pow(beta1, 1.0 + theta1);
    if (p == beta2) r.notes.push_back("tie beta1^(1+theta1) = beta2 assigned to case2");
    if (p == std::pow(beta2, 1.0 + theta2)) r.notes.push_back("tie beta1^(1+theta1) = beta2^(1+theta2) assigned to case2");
    if (theta1 > theta2) r.notes.push_back("theta1 > theta2: formula evaluated as stated");
    return r;
}

/// Dimension of the simultaneous set with targets depending on both
/// coordinates. The value is the same formula; `applicable` records whether
/// beta2 > beta1^kappa1 and beta1 > beta2^kappa2 hold, outside of which the
/// result is not asserted.
inline DimensionReport dim_simultaneous_inhom(double beta1, double beta2, const TauFunction& tau1,
                                              const TauFunction& tau2) {
    const TauExtrema e1 = tau1.extrema();
    const TauExtrema e2 = tau2.extrema();
    DimensionReport r = dim_simultaneous(beta1, beta2, e1.theta, e2.theta);
    const double k1 = std::pow(beta1, e1.kappa);
    const double k2 = std::pow(beta2, e2.kappa);
    r.applicable = beta2 > k1 && beta1 > k2;
    r.applicable_weak = beta2 >= k1 && beta1 >= k2;
    if (!*r.applicable) {
        r.notes.push_back("hypothesis beta2 > beta1^kappa1 and beta1 > beta2^kappa2 fails; value not asserted");
    }
    if (e1.heuristic || e2.heuristic) r.provenance = "heuristic";
    return r;
}

/// Exponent vectors of a rectangle-to-rectangle transference problem.
struct MtpProblem {
    std::vector<double> a;
    std::vector<double> t;

    std::size_t dimension() const { return a.size(); }

    void validate() const {
        if (a.empty()) throw DomainError("MTP exponent vectors are empty");
        if (a.size() != t.size()) throw DomainError("MTP vectors a and t differ in length");
        for (double v : a) {
            if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("MTP needs a_k > 0");
        }
        for (double v : t) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("MTP needs t_k >= 0");
        }
    }
};

/// One candidate A with its index partition (1-based) and value s_A.
struct MtpEntry {
    double A = 0.0;
    std::vector<int> k1, k2, k3;
    double s_A = 0.0;
};

struct MtpResult {
    double s = 0.0;
    std::vector<MtpEntry> per_A;
    std::vector<double> argmin_A;
};

/// Lower bound min over A in {a_k, a_k + t_k} of
/// #K1 + #K2 + (sum_{K3} a_k - sum_{K2} t_k) / A, with
/// K1 = {a_k >= A}, K2 = {a_k + t_k <= A} \ K1, K3 the rest.
inline MtpResult mtp_lower_bound(const MtpProblem& p) {
    p.validate();
    const std::size_t d = p.dimension();
    std::vector<double> candidates;
    for (std::size_t k = 0; k < d; ++k) {
        candidates.push_back(p.a[k]);
        candidates.push_back(p.a[k] + p.t[k]);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    MtpResult out;
    out.s = std::numeric_limits<double>::infinity();
    for (double A : candidates) {
        MtpEntry e;
        e.A = A;
        double num = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const int idx = static_cast<int>(k) + 1;
            if (p.a[k] >= A) {
                e.k1.push_back(idx);
            } else if (p.a[k] + p.t[k] <= A) {
                e.k2.push_back(idx);
                num -= p.t[k];
            } else {
                e.k3.push_back(idx);
                num += p.a[k];
            }
        }
        e.s_A = static_cast<double>(e.k1.size() + e.k2.size()) + num / A;
        out.s = std::min(out.s, e.s_A);
        out.per_A.push_back(std::move(e));
    }
    const double tie = 1e-12 * std::max(1.0, std::fabs(out.s));
    for (const auto& e : out.per_A) {
        if (e.s_A - out.s <= tie) out.argmin_A.push_back(e.A);
    }
    return out;
}

/// The two-dimensional problem behind the simultaneous lower bound:
/// a = ((1-eps) lambda, 1-eps), t = ((theta1 + 2 eps) lambda, theta2 + 2 eps).
inline MtpProblem mtp_simultaneous_problem(double beta1, double beta2, double theta1, double theta2, double eps = 0.0) {
    detail::check_simultaneous(beta1, beta2, theta1, theta2);
    if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("eps must lie in [0,1)");
    const double lambda = std::log(beta1) / std::log(beta2);
    return MtpProblem{{(1.0 - eps) * lambda, 1.0 - eps}, {(theta1 + 2.0 * eps) * lambda, theta2 + 2.0 * eps}};
}

struct MtpAgreement {
    bool match = false;
    double mtp_value = 0.0;
    double formula_value = 0.0;
};

/// Whether the transference lower bound at eps = 0 equals the closed form.
inline MtpAgreement mtp_matches_theorem2(double beta1, double beta2, double theta1, double theta2,
                                         double tolerance = 1e-9) {
    MtpAgreement out;
    out.mtp_value = mtp_lower_bound(mtp_simultaneous_problem(beta1, beta2, theta1, theta2)).s;
    out.formula_value = dim_simultaneous(beta1, beta2, theta1, theta2).value;
    out.match = std::fabs(out.mtp_value - out.formula_value) <= tolerance;
    return out;
}

}  // namespace betadyn
