// Partial sums of the covering series at a few exponents and the critical
// exponent found by bisection, for phi(n) = 2^(-tau n) in base 2.

#include <cstdio>

#include "betadyn/betadyn.hpp"

int main() {
    using namespace betadyn;
    const FloatBasis basis = FloatBasis::parse("2");
    for (double tau : {0.5, 1.0, 2.0}) {
        const FamilyFunction family = thm1_family(basis, RateFunction::pow(tau, 2.0));
        std::printf("tau = %.1f\n", tau);
        for (double s : {1.2, 1.4, 1.6, 1.8}) {
            const ContentScan scan = content_scan(at_exponent(family, s), s);
            std::printf("  s = %.1f  rate %+.5f  partial sum %.4g  %s\n", s, scan.average_rate,
                        scan.partial_sums.back(), verdict_name(scan.verdict).c_str());
        }
        const CriticalScan crit = critical_exponent_scan(family, 1.01, 1.99);
        std::printf("  critical exponent %.8f (closed form %.8f)\n", crit.s_star, dim_inhom_planar(tau));
    }
}
