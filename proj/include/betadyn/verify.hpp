#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "betadyn/basis.hpp"
#include "betadyn/content.hpp"
#include "betadyn/cylinders.hpp"
#include "betadyn/dimension.hpp"
#include "betadyn/functions.hpp"
#include "betadyn/serialize.hpp"

namespace betadyn {

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::string suite;
    std::vector<VerifyCheck> checks;

    bool passed() const {
        for (const auto& c : checks) {
            if (!c.passed) return false;
        }
        return true;
    }

    void add(std::string name, bool ok, std::string detail = {}) {
        checks.push_back({std::move(name), ok, std::move(detail)});
    }
};

inline const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> names{"renyi", "fullgaps", "mtp-thm2", "continuity", "critical", "reduction"};
    return names;
}

/// The bases used by the combinatorial suites.
inline std::vector<std::string> verify_bases() { return {"golden", "1.9", "2", "2.5", "e", "3"}; }

namespace detail {

inline VerifyReport verify_renyi(std::size_t max_n = 14) {
    VerifyReport r{"renyi", {}};
    for (const auto& b : verify_bases()) {
        const FloatBasis basis = FloatBasis::parse(b);
        for (std::size_t n = 1; n <= max_n; ++n) {
            const double count = static_cast<double>(count_words(basis, n));
            const double lo = renyi_lower_bound(basis.value(), n), hi = renyi_upper_bound(basis.value(), n);
            r.add("beta=" + b + " n=" + std::to_string(n), lo <= count && count <= hi,
                  format_number(lo) + " <= " + format_number(count) + " <= " + format_number(hi));
        }
    }
    return r;
}

inline VerifyReport verify_fullgaps(std::size_t max_n = 10) {
    VerifyReport r{"fullgaps", {}};
    for (const auto& b : verify_bases()) {
        const FloatBasis basis = FloatBasis::parse(b);
        for (std::size_t n = 1; n <= max_n; ++n) {
            const auto cyls = enumerate_cylinders(basis, n);
            double chain = std::fabs(cyls.front().left);
            std::size_t run = 0, longest = 0;
            for (std::size_t k = 0; k < cyls.size(); ++k) {
                const double next_left = k + 1 < cyls.size() ? cyls[k + 1].left : 1.0;
                chain = std::max(chain, std::fabs(cyls[k].right - next_left));
                run = cyls[k].is_full ? 0 : run + 1;
                longest = std::max(longest, run);
            }
            r.add("beta=" + b + " n=" + std::to_string(n), chain < 1e-12 && longest <= n,
                  "chain error " + format_number(chain) + ", longest non-full run " + std::to_string(longest));
        }
    }
    return r;
}

inline VerifyReport verify_mtp(std::size_t tuples = 1000, std::uint64_t seed = 20240611) {
    VerifyReport r{"mtp-thm2", {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ub(1.05, 6.0), ut(0.01, 3.0);
    std::size_t failures = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < tuples; ++i) {
        double b1 = ub(rng), b2 = ub(rng);
        if (b2 < b1) std::swap(b1, b2);
        const double t1 = ut(rng), t2 = ut(rng);
        const MtpAgreement a = mtp_matches_theorem2(b1, b2, t1, t2);
        worst = std::max(worst, std::fabs(a.mtp_value - a.formula_value));
        if (!a.match) {
            ++failures;
            r.add("tuple " + std::to_string(i), false,
                  "beta1=" + format_number(b1) + " beta2=" + format_number(b2) + " theta1=" + format_number(t1) +
                      " theta2=" + format_number(t2) + " mtp=" + format_number(a.mtp_value) +
                      " formula=" + format_number(a.formula_value));
        }
    }
    r.add("agreement on " + std::to_string(tuples) + " tuples", failures == 0,
          "max deviation " + format_number(worst));
    return r;
}

inline double branch_min(SimulCase c, double lambda, double t1, double t2) {
    const auto [a, b] = simultaneous_branches(c, lambda, t1, t2);
    return std::min(a.value, b.value);
}

inline VerifyReport verify_continuity(std::size_t points = 200, std::uint64_t seed = 7) {
    VerifyReport r{"continuity", {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ub(1.1, 4.0), ut(0.05, 2.5);
    double worst12 = 0.0, worst23 = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        // beta1^(1+theta1) = beta2
        const double b1 = ub(rng), t1 = ut(rng), t2 = t1 + ut(rng);
        const double b2 = std::pow(b1, 1.0 + t1);
        const double lambda = std::log(b1) / std::log(b2);
        worst12 = std::max(worst12, std::fabs(branch_min(SimulCase::Case1, lambda, t1, t2) -
                                               branch_min(SimulCase::Case2, lambda, t1, t2)));
    }
    for (std::size_t i = 0; i < points; ++i) {
        // beta1^(1+theta1) = beta2^(1+theta2), needs theta1 >= theta2 for beta2 >= beta1
        const double t2 = ut(rng), t1 = t2 + ut(rng);
        const double lambda = (1.0 + t2) / (1.0 + t1);
        worst23 = std::max(worst23, std::fabs(branch_min(SimulCase::Case2, lambda, t1, t2) -
                                               branch_min(SimulCase::Case3, lambda, t1, t2)));
    }
    r.add("case1/case2 boundary, " + std::to_string(points) + " points", worst12 <= 1e-9,
          "max jump " + format_number(worst12));
    r.add("case2/case3 boundary, " + std::to_string(points) + " points", worst23 <= 1e-9,
          "max jump " + format_number(worst23));
    return r;
}

inline VerifyReport verify_critical() {
    VerifyReport r{"critical", {}};
    struct Case {
        std::string beta;
        RateFunction phi;
        double expected;
    };
    const std::vector<Case> cases{{"2", RateFunction::pow(1.0, 2.0), 1.5},
                                  {"2", RateFunction::pow(1.0, 4.0), 4.0 / 3.0},
                                  {"3", RateFunction::pow(2.0, 3.0), 4.0 / 3.0}};
    for (const auto& c : cases) {
        const FloatBasis basis = FloatBasis::parse(c.beta);
        const CriticalScan scan = critical_exponent_scan(thm1_family(basis, c.phi), 1.01, 1.99);
        r.add("beta=" + c.beta + " phi=" + c.phi.describe(), std::fabs(scan.s_star - c.expected) <= 1e-5,
              "s* = " + format_number(scan.s_star) + ", expected " + format_number(c.expected));
    }
    return r;
}

inline VerifyReport verify_reduction() {
    VerifyReport r{"reduction", {}};
    double worst = 0.0;
    std::size_t count = 0;
    for (int i = 0; i < 50; ++i) {
        const double beta = 1.1 + 0.1 * i;
        for (int j = 0; j < 50; ++j) {
            const double t1 = 0.05 + 0.04 * (j % 10);
            const double t2 = t1 + 0.1 * (j / 10);
            const double wang_li = std::min(2.0 / (1.0 + t1), (2.0 + t2 - t1) / (1.0 + t2));
            worst = std::max(worst, std::fabs(dim_simultaneous(beta, beta, t1, t2).value - wang_li));
            ++count;
        }
    }
    r.add("equal bases, " + std::to_string(count) + " points", worst <= 1e-12, "max deviation " + format_number(worst));
    return r;
}

}  // namespace detail

/// Runs a named property suite at default sizes.
inline VerifyReport run_verify_suite(std::string_view suite) {
    if (suite == "renyi") return detail::verify_renyi();
    if (suite == "fullgaps") return detail::verify_fullgaps();
    if (suite == "mtp-thm2") return detail::verify_mtp();
    if (suite == "continuity") return detail::verify_continuity();
    if (suite == "critical") return detail::verify_critical();
    if (suite == "reduction") return detail::verify_reduction();
    throw DomainError("unknown verify suite '" + std::string(suite) + "'");
}

inline Json to_json(const VerifyReport& r) {
    Json j;
    j["suite"] = r.suite;
    j["passed"] = r.passed();
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["checks"] = checks;
    return j;
}

}  // namespace betadyn
