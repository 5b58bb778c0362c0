// Simultaneous dimension against its transference lower bound over a few bases.

#include <cstdio>

#include "betadyn/betadyn.hpp"

int main() {
    const double theta1 = 0.5, theta2 = 1.0;
    std::printf("theta1 = %.2f, theta2 = %.2f\n", theta1, theta2);
    std::printf("%8s %8s %7s %12s %12s\n", "beta1", "beta2", "case", "formula", "mtp");
    for (double beta2 : {2.0, 2.5, 3.0, 4.0, 8.0, 16.0}) {
        const double beta1 = 2.0;
        const auto report = betadyn::dim_simultaneous(beta1, beta2, theta1, theta2);
        const auto agree = betadyn::mtp_matches_theorem2(beta1, beta2, theta1, theta2);
        std::printf("%8.3f %8.3f %7s %12.9f %12.9f\n", beta1, beta2, report.branch.c_str(), report.value,
                    agree.mtp_value);
    }

    std::printf("\nshrinking target, phi = beta^(-alpha n)\n");
    for (double alpha : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        std::printf("  alpha = %.1f  dim = %.6f  planar dim = %.6f\n", alpha, betadyn::dim_shrinking_target(alpha),
                    betadyn::dim_inhom_planar(alpha));
    }
}
