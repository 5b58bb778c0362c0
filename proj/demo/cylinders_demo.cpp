// Lists the cylinders of a base and order, marking the full ones.
//   cylinders_demo [beta] [n]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "betadyn/betadyn.hpp"

int main(int argc, char** argv) {
    const std::string beta = argc > 1 ? argv[1] : "golden";
    const std::size_t n = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 4;
    try {
        const auto basis = betadyn::FloatBasis::parse(beta);
        const auto cyls = betadyn::enumerate_cylinders(basis, n);
        std::printf("beta = %s, n = %zu: %zu words (Renyi bounds %.3f .. %.3f)\n", beta.c_str(), n, cyls.size(),
                    betadyn::renyi_lower_bound(basis.value(), n), betadyn::renyi_upper_bound(basis.value(), n));
        for (const auto& c : cyls) {
            std::printf("  %-12s [%.9f, %.9f)  %s\n", c.word.to_string().c_str(), c.left, c.right,
                        c.is_full ? "full" : "");
        }
    } catch (const betadyn::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
