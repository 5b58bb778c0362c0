// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "betadyn/betadyn.hpp"

namespace {

using namespace betadyn;
using Clock = std::chrono::steady_clock;

constexpr double kRenyiSeconds = 30.0;
constexpr double kPartitionTol = 1e-12;
constexpr double kPartitionSeconds = 30.0;
constexpr double kMtpTol = 1e-12;
constexpr double kTheoremTol = 1e-9;
constexpr double kReductionTol = 1e-12;
constexpr double kCriticalTol = 1e-5;
constexpr double kCriticalSeconds = 5.0;
constexpr double kTailTol = 1e-6;
constexpr double kBlowup = 1e6;
constexpr std::size_t kBlowupBefore = 150;
constexpr double kResidualTol = 1e-10;
constexpr double kThirdTol = 1e-12;
constexpr double kDivergentFraction = 0.99;
constexpr double kFinalFraction = 0.05;
constexpr double kTailFactor = 3.0;
constexpr double kMonteCarloSeconds = 60.0;
constexpr double kEndpointGap = 1e-6;

const std::vector<std::string> kBases{"golden", "1.9", "2", "2.5", "e", "3"};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        if (detail.str().find(what) == std::string::npos) detail << (pass ? "" : "; ") << what;
        pass = false;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Outcome renyi_bounds() {
    Outcome o;
    const auto t0 = Clock::now();
    for (const auto& b : kBases) {
        const FloatBasis basis = FloatBasis::parse(b);
        const double beta = basis.value();
        for (std::size_t n = 1; n <= 14; ++n) {
            std::uint64_t count = 0;
            for_each_word(basis, n, [&](const std::vector<int>&, bool) { ++count; });
            o.require(count == count_words(basis, n), "beta=" + b + " n=" + std::to_string(n) + " count mismatch");
            const double c = static_cast<double>(count);
            const double lo = std::pow(beta, static_cast<double>(n));
            const double hi = std::pow(beta, static_cast<double>(n + 1)) / (beta - 1.0);
            o.require(lo <= c && c <= hi, "beta=" + b + " n=" + std::to_string(n) + " count " + fmt(c));
        }
    }
    const double secs = seconds_since(t0);
    o.require(secs < kRenyiSeconds, "runtime " + fmt(secs) + " s");
    if (o.pass) o.detail << "6 bases, n <= 14, " << fmt(secs) << " s";
    return o;
}

Outcome partition_and_gaps() {
    Outcome o;
    const auto t0 = Clock::now();
    double worst_chain = 0.0;
    for (const auto& b : kBases) {
        const FloatBasis basis = FloatBasis::parse(b);
        for (std::size_t n = 1; n <= 10; ++n) {
            const auto cyls = enumerate_cylinders(basis, n);
            double chain = std::fabs(cyls.front().left);
            std::size_t run = 0, longest = 0;
            for (std::size_t k = 0; k < cyls.size(); ++k) {
                const double next = k + 1 < cyls.size() ? cyls[k + 1].left : 1.0;
                chain = std::max(chain, std::fabs(cyls[k].right - next));
                run = cyls[k].is_full ? 0 : run + 1;
                longest = std::max(longest, run);
            }
            worst_chain = std::max(worst_chain, chain);
            o.require(chain < kPartitionTol, "beta=" + b + " n=" + std::to_string(n) + " chain " + fmt(chain));
            o.require(longest <= n, "beta=" + b + " n=" + std::to_string(n) + " run " + std::to_string(longest));
        }
    }
    const double secs = seconds_since(t0);
    o.require(secs < kPartitionSeconds, "runtime " + fmt(secs) + " s");
    if (o.pass) o.detail << "max chain error " << fmt(worst_chain) << ", " << fmt(secs) << " s";
    return o;
}

Outcome mtp_oracle() {
    Outcome o;
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double alpha = u(rng);
        const double got = mtp_lower_bound({{1.0}, {alpha}}).s;
        const double dev = std::fabs(got - 1.0 / (1.0 + alpha));
        worst = std::max(worst, dev);
        o.require(dev <= kMtpTol, "d=1 alpha=" + fmt(alpha));
    }
    for (int i = 0; i < 100; ++i) {
        double t1 = u(rng), t2 = u(rng);
        if (t2 < t1) std::swap(t1, t2);
        const double got = mtp_lower_bound({{1.0, 1.0}, {t1, t2}}).s;
        const double dev = std::fabs(got - std::min(2.0 / (1.0 + t1), (2.0 + t2 - t1) / (1.0 + t2)));
        worst = std::max(worst, dev);
        o.require(dev <= kMtpTol, "d=2 theta=(" + fmt(t1) + "," + fmt(t2) + ")");
    }
    if (o.pass) o.detail << "200 problems, max deviation " << fmt(worst);
    return o;
}

Outcome simultaneous_sandwich() {
    Outcome o;
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> ub(1.05, 6.0), ut(0.01, 3.0);
    std::size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        double b1 = ub(rng), b2 = ub(rng);
        if (b2 < b1) std::swap(b1, b2);
        if (!mtp_matches_theorem2(b1, b2, ut(rng), ut(rng), kTheoremTol).match) ++mismatches;
    }
    o.require(mismatches == 0, std::to_string(mismatches) + " of 1000 tuples disagree");

    // Approach each case boundary from both sides.
    const double nudge = 1e-13;
    std::uniform_real_distribution<double> ub1(1.1, 4.0), ut1(0.05, 2.5);
    double jump12 = 0.0, jump23 = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double b1 = ub1(rng), t1 = ut1(rng), t2 = t1 + ut1(rng);
        const double b2 = std::pow(b1, 1.0 + t1);
        const auto below = dim_simultaneous(b1, b2 * (1.0 - nudge), t1, t2);
        const auto above = dim_simultaneous(b1, b2 * (1.0 + nudge), t1, t2);
        o.require(below.branch == "case2" && above.branch == "case1",
                  "case1/case2 boundary not straddled");
        jump12 = std::max(jump12, std::fabs(below.value - above.value));
    }
    for (int i = 0; i < 200; ++i) {
        const double b1 = ub1(rng), t2 = ut1(rng), t1 = t2 + ut1(rng);
        const double b2 = std::pow(b1, (1.0 + t1) / (1.0 + t2));
        const auto below = dim_simultaneous(b1, b2 * (1.0 - nudge), t1, t2);
        const auto above = dim_simultaneous(b1, b2 * (1.0 + nudge), t1, t2);
        o.require(below.branch == "case3" && above.branch == "case2",
                  "case2/case3 boundary not straddled");
        jump23 = std::max(jump23, std::fabs(below.value - above.value));
    }
    o.require(jump12 <= kTheoremTol, "case1/case2 jump " + fmt(jump12));
    o.require(jump23 <= kTheoremTol, "case2/case3 jump " + fmt(jump23));
    if (o.pass) o.detail << "1000 tuples agree, boundary jumps " << fmt(jump12) << ", " << fmt(jump23);
    return o;
}

Outcome equal_base_reduction() {
    Outcome o;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double beta = 1.05 + 0.1 * i;
        for (int j = 0; j < 50; ++j) {
            const double t1 = 0.02 + 0.05 * (j % 10);
            const double t2 = t1 + 0.15 * (j / 10);
            const double expected = std::min(2.0 / (1.0 + t1), (2.0 + t2 - t1) / (1.0 + t2));
            worst = std::max(worst, std::fabs(dim_simultaneous(beta, beta, t1, t2).value - expected));
        }
    }
    o.require(worst <= kReductionTol, "max deviation " + fmt(worst));
    if (o.pass) o.detail << "2500 points, max deviation " << fmt(worst);
    return o;
}

Outcome critical_exponents() {
    Outcome o;
    struct Case {
        const char* beta;
        RateFunction phi;
        double expected;
    };
    const std::vector<Case> cases{{"2", RateFunction::pow(1.0, 2.0), 1.5},
                                  {"2", RateFunction::pow(1.0, 4.0), 4.0 / 3.0},
                                  {"3", RateFunction::pow(2.0, 3.0), 4.0 / 3.0}};
    for (const auto& c : cases) {
        const auto t0 = Clock::now();
        const FloatBasis basis = FloatBasis::parse(c.beta);
        const double s = critical_exponent_scan(thm1_family(basis, c.phi), 1.01, 1.99).s_star;
        const double secs = seconds_since(t0);
        o.require(std::fabs(s - c.expected) <= kCriticalTol,
                  std::string("beta=") + c.beta + " " + c.phi.describe() + " gave " + fmt(s));
        o.require(secs < kCriticalSeconds, std::string("beta=") + c.beta + " took " + fmt(secs) + " s");
        o.detail << (o.detail.tellp() > 0 ? ", " : "") << "s*=" << std::to_string(s) << " (" << fmt(secs) << " s)";
    }
    return o;
}

Outcome content_sums() {
    Outcome o;
    const FloatBasis basis = FloatBasis::parse("2");
    const FamilyFunction family = thm1_family(basis, RateFunction::pow(1.0, 2.0));
    const double step = 0.2 * std::log(2.0);

    const ContentScan conv = content_scan(at_exponent(family, 1.6), 1.6);
    // Geometric oracle: the terms decay like 2^(-0.2 n), so the tail past 200 is at most a multiple of 2^(-40).
    const double oracle_tail = std::exp(conv.log_terms[200]) / (1.0 - std::exp(-step));
    o.require(conv.tail < kTailTol, "tail at s=1.6 is " + fmt(conv.tail));
    o.require(std::fabs(conv.tail - oracle_tail) <= 1e-3 * oracle_tail, "tail disagrees with geometric oracle");
    o.require(std::fabs(conv.average_rate + step) < 1e-3, "rate at s=1.6 is " + fmt(conv.average_rate));
    o.require(conv.verdict == Verdict::Converging, "s=1.6 verdict " + verdict_name(conv.verdict));

    const ContentScan div = content_scan(at_exponent(family, 1.4), 1.4);
    const auto first = div.first_exceeding(kBlowup);
    o.require(first && *first < kBlowupBefore, "partial sums at s=1.4 stay below 1e6 before n=150");
    o.require(std::fabs(div.average_rate - step) < 1e-3, "rate at s=1.4 is " + fmt(div.average_rate));
    o.require(div.verdict == Verdict::Diverging, "s=1.4 verdict " + verdict_name(div.verdict));
    if (o.pass) {
        o.detail << "tail " << fmt(conv.tail) << " (oracle " << fmt(oracle_tail) << "), blowup at n=" << *first;
    }
    return o;
}

long double cylinder_residual(double beta, const Word& w, double x, const LipschitzMap1D& f) {
    long double left = 0.0L, scale = 1.0L;
    for (int d : w.digits) {
        scale /= beta;
        left += d * scale;
    }
    return (static_cast<long double>(x) - left) / scale - static_cast<long double>(f(x));
}

Outcome target_solver() {
    Outcome o;
    std::mt19937_64 rng(303);
    const std::vector<std::string> bases{"2", "golden", "2.5"};
    std::uniform_int_distribution<std::size_t> pick_base(0, bases.size() - 1), pick_n(3, 12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    long double worst = 0.0L;
    for (int i = 0; i < 1000; ++i) {
        const FloatBasis basis = FloatBasis::parse(bases[pick_base(rng)]);
        const std::size_t n = pick_n(rng);
        const auto full = full_words(basis, n);
        const Word& w = full[std::uniform_int_distribution<std::size_t>(0, full.size() - 1)(rng)];
        LipschitzMap1D f = LipschitzMap1D::identity();
        switch (i % 3) {
            case 1: f = LipschitzMap1D::constant(unit(rng)); break;
            case 2: f = LipschitzMap1D::affine(unit(rng) - 0.5, 0.25 + 0.5 * unit(rng)); break;
            default: break;
        }
        const double x = solve_target_point(basis, w, f, kResidualTol);
        const long double res = std::fabs(cylinder_residual(basis.value(), w, x, f));
        worst = std::max(worst, res);
        o.require(res < kResidualTol, "residual " + fmt(static_cast<double>(res)) + " on " + w.to_string());
        o.require(digits(basis, x, n) == w, "point left cylinder " + w.to_string());
        if (!o.pass) break;
    }
    const double third = solve_target_point(FloatBasis::parse("2"), Word{0, 1}, LipschitzMap1D::identity(), 1e-13);
    o.require(std::fabs(third - 1.0 / 3.0) <= kThirdTol, "beta=2 w=01 identity gave " + fmt(third));
    if (o.pass) o.detail << "max residual " << fmt(static_cast<double>(worst)) << ", w=01 gives " << third;
    return o;
}

Outcome monte_carlo() {
    Outcome o;
    const auto t0 = Clock::now();
    MeasureConfig div;
    div.kind = SetKind::D;
    div.f1 = LipschitzMap1D::constant(0.3);
    div.phi = RateFunction::poly(1.0);
    div.window_lo = 1;
    div.window_hi = 200;
    div.samples = 10000;
    div.seed = 17;
    const MeasureExperiment d = mc_measure_dichotomy(div);
    o.require(d.hit_fraction >= kDivergentFraction, "divergent fraction " + fmt(d.hit_fraction));
    const MeasureExperiment again = mc_measure_dichotomy(div);
    o.require(again.hits == d.hits, "repeat run differs under the same seed");

    MeasureConfig conv = div;
    conv.phi = RateFunction::pow(1.0, 4.0);
    const auto trend = mc_window_trend(conv, 4, 8);
    std::ostringstream fractions;
    for (std::size_t k = 0; k < trend.size(); ++k) {
        fractions << (k ? "," : "") << fmt(trend[k].hit_fraction);
        o.require(trend[k].hit_fraction <= kTailFactor * trend[k].tail_bound,
                  "window " + std::to_string(k + 4) + " fraction above 3x tail bound");
        if (k > 0) {
            o.require(trend[k].hit_fraction < trend[k - 1].hit_fraction,
                      "fractions not strictly decreasing at k=" + std::to_string(k + 4));
        }
    }
    o.require(trend.back().hit_fraction < kFinalFraction, "final fraction " + fmt(trend.back().hit_fraction));
    const double secs = seconds_since(t0);
    o.require(secs < kMonteCarloSeconds, "runtime " + fmt(secs) + " s");
    o.detail << (o.pass ? "" : " | ") << "divergent " << fmt(d.hit_fraction) << ", trend " << fractions.str()
             << ", " << fmt(secs) << " s";
    return o;
}

Outcome backend_agreement() {
    Outcome o;
    const ExactBasis exact = ExactBasis::parse("5/2");
    const FloatBasis fl = FloatBasis::parse("5/2");
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<long> den(2, 1'000'000);
    Rational scale(1);
    for (int k = 0; k < 20; ++k) scale *= Rational(5, 2);
    int accepted = 0, attempts = 0;
    while (accepted < 1000 && attempts < 100000) {
        ++attempts;
        const long q = den(rng);
        const long p = std::uniform_int_distribution<long>(0, q - 1)(rng);
        const Rational x(p, q);
        const auto cyl = cylinder_of_point(exact, x, 20);
        // Distance measured on the scale of the cylinder, beta^20 (x - endpoint).
        const double gap =
            std::min(to_double(Rational(scale * (x - cyl.left))), to_double(Rational(scale * (cyl.right - x))));
        if (gap <= kEndpointGap) continue;
        ++accepted;
        const Word we = digits(exact, x, 20), wf = digits(fl, to_double(x), 20);
        o.require(we == wf, std::to_string(p) + "/" + std::to_string(q) + ": " + we.to_string() + " vs " +
                                wf.to_string());
    }
    o.require(accepted == 1000, "only " + std::to_string(accepted) + " points cleared the endpoint gap");
    if (o.pass) o.detail << accepted << " points agree (" << attempts << " drawn, rescaled endpoint gap > 1e-6)";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"Renyi bounds", renyi_bounds},
        {"cylinder partition and full gaps", partition_and_gaps},
        {"MTP oracle", mtp_oracle},
        {"simultaneous formula vs MTP", simultaneous_sandwich},
        {"equal-base reduction", equal_base_reduction},
        {"critical exponents", critical_exponents},
        {"content sums", content_sums},
        {"target point solver", target_solver},
        {"Monte-Carlo dichotomy", monte_carlo},
        {"backend agreement", backend_agreement},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        if (!o.pass) ++failures;
        std::printf("criterion %zu %s: %s  %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
