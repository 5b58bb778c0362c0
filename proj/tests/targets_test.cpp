#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "betadyn/cylinders.hpp"
#include "betadyn/expansion.hpp"
#include "betadyn/functions.hpp"
#include "betadyn/hits.hpp"
#include "betadyn/solvers.hpp"

namespace {

using betadyn::ExactBasis;
using betadyn::FloatBasis;
using betadyn::LipschitzMap1D;
using betadyn::LipschitzMap2D;
using betadyn::RateFunction;
using betadyn::Rational;
using betadyn::TauFunction;
using betadyn::Word;

const double kPhi = std::numbers::phi;

std::vector<std::size_t> indices(const std::vector<betadyn::HitRecord>& hits) {
    std::vector<std::size_t> out;
    for (const auto& h : hits) out.push_back(h.n);
    return out;
}

RateFunction flat(double v, std::size_t n) { return RateFunction::table(std::vector<double>(n, v)); }

TEST(RateFunction, Values) {
    EXPECT_NEAR(RateFunction::pow(1.0, 2.0)(10), std::ldexp(1.0, -10), 1e-20);
    EXPECT_NEAR(RateFunction::geo(3.0, 0.25)(4), 3.0 / 256.0, 1e-15);
    EXPECT_NEAR(RateFunction::poly(2.0)(7), 1.0 / 49.0, 1e-15);
    EXPECT_NEAR(RateFunction::harmonic_log()(5), 1.0 / (5.0 * std::pow(std::log(6.0), 2)), 1e-15);
    EXPECT_NEAR(RateFunction::table({0.5, 0.25})(2), 0.25, 0);
    EXPECT_THROW(RateFunction::table({0.5})(2), betadyn::RangeError);
    EXPECT_NEAR(RateFunction::pow(3.0, 2.0).log_value(1000), -3000.0 * std::log(2.0), 1e-9);
}

TEST(RateFunction, Parse) {
    EXPECT_NEAR(RateFunction::parse("pow:1.0", 3.0)(2), 1.0 / 9.0, 1e-15);
    EXPECT_NEAR(RateFunction::parse("pow:2:4", 3.0)(1), 1.0 / 16.0, 1e-15);
    EXPECT_NEAR(RateFunction::parse("geo:1:0.25", 2.0)(3), 1.0 / 64.0, 1e-15);
    EXPECT_NEAR(RateFunction::parse("poly:2", 2.0)(3), 1.0 / 9.0, 1e-15);
    EXPECT_NEAR(RateFunction::parse("table:0.5,0.1", 2.0)(2), 0.1, 0);
    EXPECT_THROW(RateFunction::parse("geo:1:2", 2.0), betadyn::DomainError);
    EXPECT_THROW(RateFunction::parse("pow", 2.0), betadyn::DomainError);
    EXPECT_THROW(RateFunction::parse("cubic:1", 2.0), betadyn::DomainError);
}

TEST(Targets, Parse) {
    EXPECT_DOUBLE_EQ(LipschitzMap1D::parse("const:0.5")(0.1), 0.5);
    EXPECT_DOUBLE_EQ(LipschitzMap1D::parse("id")(0.3), 0.3);
    EXPECT_DOUBLE_EQ(LipschitzMap1D::parse("affine:0.5:0.1")(0.4), 0.3);
    EXPECT_DOUBLE_EQ(LipschitzMap1D::parse("affine:2:0.5")(0.9), 1.0);
    EXPECT_DOUBLE_EQ(LipschitzMap2D::parse("affine2:0.5:0.5:0")(0.2, 0.4), 0.30000000000000004);
    EXPECT_DOUBLE_EQ(LipschitzMap2D::parse("y")(0.2, 0.4), 0.4);
    EXPECT_DOUBLE_EQ(LipschitzMap2D::parse("fx:const:0.7")(0.2, 0.4), 0.7);
    EXPECT_THROW(LipschitzMap1D::parse("const:2"), betadyn::DomainError);
    EXPECT_THROW(LipschitzMap2D::parse("z"), betadyn::DomainError);
}

TEST(Targets, LipschitzBoundHoldsOnSamples) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<LipschitzMap1D> one{LipschitzMap1D::constant(0.3), LipschitzMap1D::identity(),
                                          LipschitzMap1D::affine(-1.7, 1.2), LipschitzMap1D::affine(3.0, -0.5)};
    const std::vector<LipschitzMap2D> two{LipschitzMap2D::constant(0.1), LipschitzMap2D::affine2(0.6, -0.8, 0.5),
                                          LipschitzMap2D::of_x(LipschitzMap1D::affine(2.0, -0.2)),
                                          LipschitzMap2D::of_y(LipschitzMap1D::identity())};
    for (int i = 0; i < 5000; ++i) {
        const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        for (const auto& f : one) EXPECT_LE(std::fabs(f(a) - f(b)), f.lipschitz_bound() * std::fabs(a - b) + 1e-15);
        for (const auto& g : two) {
            EXPECT_LE(std::fabs(g(a, c) - g(b, d)), g.lipschitz_bound() * std::hypot(a - b, c - d) + 1e-15);
        }
    }
}

TEST(Tau, Extrema) {
    const auto c = betadyn::tau_extrema(TauFunction::constant(0.7));
    EXPECT_DOUBLE_EQ(c.theta, 0.7);
    EXPECT_DOUBLE_EQ(c.kappa, 0.7);
    const auto up = betadyn::tau_extrema(TauFunction::affine_clamped(1.0, 0.5, 0.1));
    EXPECT_DOUBLE_EQ(up.theta, 0.5);
    EXPECT_DOUBLE_EQ(up.kappa, 1.5);
    const auto down = betadyn::tau_extrema(TauFunction::affine_clamped(-2.0, 0.5, 0.1));
    EXPECT_DOUBLE_EQ(down.theta, 0.1);
    EXPECT_DOUBLE_EQ(down.kappa, 0.5);
    EXPECT_FALSE(down.heuristic);

    const auto custom = TauFunction::custom([](double x) { return 1.0 + (x - 0.3) * (x - 0.3); }).extrema();
    EXPECT_NEAR(custom.theta, 1.0, 1e-12);
    EXPECT_NEAR(custom.kappa, 1.49, 1e-12);
    EXPECT_TRUE(custom.heuristic);

    EXPECT_THROW(TauFunction::constant(0.0), betadyn::DomainError);
    EXPECT_THROW(TauFunction::custom([](double x) { return x - 0.5; }).extrema(), betadyn::DomainError);
}

TEST(Hits1d, Examples) {
    const ExactBasis two = ExactBasis::parse("2");
    const auto rec = betadyn::hits_1d(two, Rational(1, 3), LipschitzMap1D::identity(), flat(0.01, 10), 10);
    EXPECT_EQ(indices(rec), (std::vector<std::size_t>{2, 4, 6, 8, 10}));
    for (const auto& h : rec) EXPECT_EQ(h.distance, 0.0);

    EXPECT_TRUE(betadyn::hits_1d(two, Rational(1, 3), LipschitzMap1D::constant(0.0), RateFunction::pow(1.0, 2.0), 10)
                    .empty());
    EXPECT_EQ(indices(betadyn::hits_1d(two, Rational(1, 2), LipschitzMap1D::constant(0.0), RateFunction::poly(1.0), 5)),
              (std::vector<std::size_t>{1, 2, 3, 4, 5}));
}

TEST(Hits1d, AgreesWithDirectOrbit) {
    const ExactBasis basis = ExactBasis::parse("5/2");
    const RateFunction phi = RateFunction::poly(1.0);
    const LipschitzMap1D f = LipschitzMap1D::affine(0.5, 0.2);
    for (int i = 1; i < 60; ++i) {
        const Rational x(i, 61);
        const Rational fx = Rational(1, 2) * x + Rational(1, 5);
        std::vector<std::size_t> want;
        Rational cur = x;
        for (std::size_t n = 1; n <= 30; ++n) {
            cur = cur * Rational(5, 2);
            cur -= Rational(static_cast<long long>(betadyn::RealTraits<Rational>::floor_int(cur)));
            const Rational dist = cur > fx ? Rational(cur - fx) : Rational(fx - cur);
            if (betadyn::to_double(dist) < 1.0 / double(n)) want.push_back(n);
        }
        EXPECT_EQ(indices(betadyn::hits_1d(basis, x, f, phi, 30)), want) << x;
    }
}

TEST(HitsPlanar, Examples) {
    const ExactBasis two = ExactBasis::parse("2");
    const Rational x(1, 3);
    const auto one_d = betadyn::hits_1d(two, x, LipschitzMap1D::identity(), flat(0.01, 10), 10);
    const auto planar =
        betadyn::hits_inhom_planar(two, x, Rational(4, 7), LipschitzMap2D::affine2(1, 0, 0), flat(0.01, 10), 10);
    EXPECT_EQ(planar, one_d);

    const auto odd = betadyn::hits_inhom_planar(two, x, Rational(2, 3), LipschitzMap2D::of_y(LipschitzMap1D::identity()),
                                               flat(0.01, 10), 10);
    EXPECT_EQ(indices(odd), (std::vector<std::size_t>{1, 3, 5, 7, 9}));

    const FloatBasis golden = FloatBasis::parse("golden");
    const auto all = betadyn::hits_inhom_planar(golden, 0.123, 0.9, LipschitzMap2D::constant(0.4), flat(1.0, 12), 12);
    EXPECT_EQ(all.size(), 12u);
}

TEST(HitsSimultaneous, Examples) {
    const ExactBasis two = ExactBasis::parse("2");
    const ExactBasis three = ExactBasis::parse("3");
    const Rational third(1, 3);
    const auto id = LipschitzMap1D::identity();
    // theta = 2 makes the odd-step distance 1/3 miss: 2^(-2n) <= 1/4
    const auto tau = TauFunction::constant(2.0);

    EXPECT_EQ(indices(betadyn::hits_simultaneous(two, two, third, third, id, id, tau, tau, 10)),
              (std::vector<std::size_t>{2, 4, 6, 8, 10}));
    EXPECT_EQ(indices(betadyn::hits_simultaneous(two, three, third, Rational(0), id, LipschitzMap1D::constant(0.0),
                                                 TauFunction::constant(2.0), TauFunction::constant(0.3), 10)),
              (std::vector<std::size_t>{2, 4, 6, 8, 10}));
    EXPECT_TRUE(betadyn::hits_simultaneous(two, two, third, Rational(1, 2), id, id, TauFunction::constant(1.0),
                                           TauFunction::constant(1.0), 6)
                    .empty());

    const auto half = LipschitzMap2D::affine2(0.5, 0.5, 0.0);
    EXPECT_EQ(indices(betadyn::hits_simultaneous_inhom(two, two, third, third, half, half, tau, tau, 4)),
              (std::vector<std::size_t>{2, 4}));

    // thresholds below the smallest double never hit, even at distance 0
    const auto huge = TauFunction::constant(2000.0);
    EXPECT_TRUE(betadyn::hits_simultaneous(two, two, third, third, id, id, huge, huge, 10).empty());
    EXPECT_TRUE(betadyn::hits_1d(two, Rational(0), LipschitzMap1D::constant(0.0), RateFunction::pow(2000.0, 2.0), 10)
                    .empty());
}

TEST(HitsSimultaneous, SeparableReduction) {
    const FloatBasis b1 = FloatBasis::parse("golden");
    const FloatBasis b2 = FloatBasis::parse("2.5");
    const auto f1 = LipschitzMap1D::affine(0.3, 0.2), f2 = LipschitzMap1D::constant(0.6);
    const auto t1 = TauFunction::constant(0.05), t2 = TauFunction::affine_clamped(0.1, 0.02, 0.01);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng), y = u(rng);
        EXPECT_EQ(betadyn::hits_simultaneous(b1, b2, x, y, f1, f2, t1, t2, 30),
                  betadyn::hits_simultaneous_inhom(b1, b2, x, y, LipschitzMap2D::of_x(f1), LipschitzMap2D::of_y(f2),
                                                   t1, t2, 30));
    }
}

TEST(HitsSimultaneous, OrderWarning) {
    EXPECT_FALSE(betadyn::simultaneous_order_warning(2.0, 3.0).has_value());
    EXPECT_TRUE(betadyn::simultaneous_order_warning(3.0, 2.0).has_value());
}

TEST(Solver, Examples) {
    const FloatBasis two = FloatBasis::parse("2");
    EXPECT_NEAR(betadyn::solve_target_point(two, Word{0, 1}, LipschitzMap1D::identity(), 1e-12), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(betadyn::solve_target_point(two, Word{0}, LipschitzMap1D::constant(0.8), 1e-12), 0.4, 1e-12);
    EXPECT_THROW(betadyn::solve_target_point(FloatBasis::parse("e"), betadyn::full_words(FloatBasis::parse("e"), 12).back(),
                                             LipschitzMap1D::identity(), 1e-15),
                 betadyn::RangeError);

    const FloatBasis golden = FloatBasis::parse("golden");
    const double x = betadyn::solve_target_point(golden, Word{1, 0}, LipschitzMap1D::identity(), 1e-6);
    EXPECT_LT(x, 1.0);
    EXPECT_NEAR(x, 1.0, 1e-6);
    EXPECT_LT(std::fabs(kPhi * kPhi * (x - 1.0 / kPhi) - x), 1e-6);
}

TEST(Solver, Preconditions) {
    const FloatBasis golden = FloatBasis::parse("golden");
    EXPECT_THROW(betadyn::solve_target_point(golden, Word{1}, LipschitzMap1D::identity(), 1e-9),
                 betadyn::PreconditionError);
    EXPECT_THROW(betadyn::solve_target_point(FloatBasis::parse("2"), Word{0}, LipschitzMap1D::affine(3.0, 0.0), 1e-9),
                 betadyn::PreconditionError);
}

TEST(Solver, ResidualOnRandomFullCylinders) {
    std::mt19937_64 rng(99);
    for (const char* b : {"2", "golden", "2.5", "e"}) {
        const FloatBasis basis = FloatBasis::parse(b);
        for (std::size_t n = 2; n <= 10; ++n) {
            const auto words = betadyn::full_words(basis, n);
            for (int k = 0; k < 20; ++k) {
                const Word& w = words[rng() % words.size()];
                const auto f = LipschitzMap1D::affine(0.7, 0.1);
                const double x = betadyn::solve_target_point(basis, w, f, 1e-10);
                const auto c = betadyn::cylinder_interval(basis, w);
                EXPECT_LE(c.left, x);
                EXPECT_LT(x, c.right);
                EXPECT_LT(std::fabs(std::pow(basis.value(), double(n)) * (x - c.left) - f(x)), 1e-10) << b;
            }
        }
    }
}

TEST(HitInterval, IdentityExample) {
    const auto iv = betadyn::approximate_hit_interval(FloatBasis::parse("2"), Word{0, 1}, LipschitzMap1D::identity(),
                                                      TauFunction::constant(1.0));
    EXPECT_TRUE(iv.outer.contains(1.0 / 3.0));
    EXPECT_LE(iv.outer.length(), 0.25);
}

TEST(HitInterval, ConstantTargetIsExact) {
    const FloatBasis basis = FloatBasis::parse("2.5");
    const double theta = 0.8, c = 0.45;
    for (const Word& w : betadyn::full_words(basis, 5)) {
        const auto iv = betadyn::approximate_hit_interval(basis, w, LipschitzMap1D::constant(c),
                                                          TauFunction::constant(theta));
        const auto cyl = betadyn::cylinder_interval(basis, w);
        const double unit = std::pow(2.5, -5.0);
        const double radius = std::pow(2.5, -5.0 * (1.0 + theta));
        const double lo = std::max(cyl.left, cyl.left + c * unit - radius);
        const double hi = std::min(cyl.right, cyl.left + c * unit + radius);
        ASSERT_FALSE(iv.outer.empty);
        const double tol = 4e-12 * unit;  // bisection tolerance plus padding
        EXPECT_NEAR(iv.outer.lo, lo, tol);
        EXPECT_NEAR(iv.outer.hi, hi, tol);
        EXPECT_NEAR(iv.outer.length(), std::min(2.0 * radius, cyl.length()), 2 * tol);
    }
}

TEST(HitInterval, UnderflowGivesEmpty) {
    const auto iv = betadyn::approximate_hit_interval(FloatBasis::parse("2"), Word{0, 1}, LipschitzMap1D::identity(),
                                                      TauFunction::constant(1000.0));
    EXPECT_TRUE(iv.outer.empty);
    EXPECT_TRUE(iv.inner.empty);
}

TEST(HitInterval, BracketsHittingSetAndObeysDiameterLaw) {
    std::mt19937_64 rng(3);
    const auto tau = TauFunction::affine_clamped(0.6, 0.3, 0.2);
    const auto ex = tau.extrema();
    for (const char* b : {"2", "golden", "3"}) {
        const FloatBasis basis = FloatBasis::parse(b);
        const auto f = LipschitzMap1D::affine(-0.9, 0.8);
        const std::size_t n0 = betadyn::diameter_law_order(basis.value(), f.lipschitz_bound());
        EXPECT_GT(std::pow(basis.value(), double(n0)), 2.0 * f.lipschitz_bound());
        for (std::size_t n = std::max<std::size_t>(n0, 2); n <= 9; ++n) {
            const auto words = betadyn::full_words(basis, n);
            for (int k = 0; k < 10; ++k) {
                const Word& w = words[rng() % words.size()];
                const auto iv = betadyn::approximate_hit_interval(basis, w, f, tau);
                const double scale = std::pow(basis.value(), double(n));
                EXPECT_LE(iv.outer.length(), 4.0 * std::pow(basis.value(), -double(n) * (1.0 + ex.theta)));
                if (!iv.inner.empty) {
                    EXPECT_TRUE(iv.outer.contains(iv.inner.lo));
                    EXPECT_TRUE(iv.outer.contains(iv.inner.hi));
                }
                // sampled hitting points lie in the outer interval; inner points hit
                const double left = iv.cylinder_left, right = iv.cylinder_right;
                for (int j = 0; j < 200; ++j) {
                    const double x = left + (right - left) * (j + 0.5) / 200.0;
                    const double r = std::fabs(scale * (x - left) - f(x));
                    const double thr = std::exp(-double(n) * tau(x) * basis.log_beta());
                    if (r < thr) {
                        EXPECT_TRUE(iv.outer.contains(x));
                    }
                    if (iv.inner.contains(x)) {
                        EXPECT_LT(r, thr);
                    }
                }
            }
        }
    }
}

}  // namespace
