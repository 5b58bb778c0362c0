#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <gmp.h>
#include <mpfr.h>

#include "betadyn/basis.hpp"
#include "betadyn/detail/bigfloat.hpp"
#include "betadyn/errors.hpp"
#include "betadyn/functions.hpp"

namespace betadyn {

/// Which limsup set a sample is tested against.
enum class SetKind {
    D,  // |T^n x - f1(x)| < phi(n), f1 usually constant
    R,  // |T^n x - x| < phi(n)
    W,  // |T^n x - g1(x, y)| < phi(n)
    F,  // both lines with targets f1(x), f2(y) and thresholds beta_i^(-n tau_i)
    G,  // both lines with targets g1(x, y), g2(x, y)
};

inline std::string set_kind_name(SetKind k) {
    switch (k) {
        case SetKind::D: return "D";
        case SetKind::R: return "R";
        case SetKind::W: return "W";
        case SetKind::F: return "F";
        case SetKind::G: return "G";
    }
    return {};
}

inline SetKind parse_set_kind(std::string_view s) {
    if (s == "D") return SetKind::D;
    if (s == "R") return SetKind::R;
    if (s == "W") return SetKind::W;
    if (s == "F") return SetKind::F;
    if (s == "G") return SetKind::G;
    throw DomainError("unknown set kind '" + std::string(s) + "' (expected D, R, W, F or G)");
}

struct MeasureConfig {
    SetKind kind = SetKind::D;
    BaseSpec base1 = BaseSpec::rational(Rational(2));
    BaseSpec base2 = BaseSpec::rational(Rational(2));
    LipschitzMap1D f1 = LipschitzMap1D::constant(0.0);
    LipschitzMap1D f2 = LipschitzMap1D::constant(0.0);
    LipschitzMap2D g1 = LipschitzMap2D::constant(0.0);
    LipschitzMap2D g2 = LipschitzMap2D::constant(0.0);
    RateFunction phi = RateFunction::poly(1.0);
    TauFunction tau1 = TauFunction::constant(1.0);
    TauFunction tau2 = TauFunction::constant(1.0);
    std::size_t window_lo = 1;
    std::size_t window_hi = 200;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 0;     // 0: hardware concurrency
    double max_work = 5e9;    // cap on samples * window_hi * lines
};

struct MeasureExperiment {
    SetKind kind = SetKind::D;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::size_t window_lo = 0, window_hi = 0;
    std::size_t hits = 0;
    double hit_fraction = 0.0;
    std::optional<bool> series_convergent;
    double tail_bound = 0.0;  // sum over the window of the measure bound of a single hit event
    long precision_bits = 0;
};

/// Counter-based generator: the k-th 64-bit word of sample i under a seed.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t random_word(std::uint64_t seed, std::uint64_t sample, std::uint64_t k) {
    return splitmix64(splitmix64(splitmix64(seed) ^ sample) ^ k);
}

namespace detail {

inline long orbit_precision(double beta, std::size_t steps) {
    return static_cast<long>(std::ceil(static_cast<double>(steps) * std::log2(beta))) + 96;
}

// Uniform point of [0,1) carrying `bits` random bits; stream separates coordinates.
inline void random_point(BigFloat& out, std::uint64_t seed, std::uint64_t sample, std::uint64_t stream) {
    const auto bits = static_cast<std::size_t>(out.precision());
    const std::size_t words = (bits + 63) / 64;
    std::vector<std::uint64_t> buf(words);
    for (std::size_t k = 0; k < words; ++k) buf[k] = random_word(seed, sample, (stream << 32) + k);
    mpz_t z;
    mpz_init(z);
    mpz_import(z, words, 1, sizeof(std::uint64_t), 0, 0, buf.data());
    mpfr_set_z_2exp(out.get(), z, -static_cast<mpfr_exp_t>(64 * words), MPFR_RNDZ);
    mpz_clear(z);
}

inline void clamp_unit(BigFloat& v) {
    if (mpfr_cmp_ui(v.get(), 0) < 0) mpfr_set_ui(v.get(), 0, MPFR_RNDN);
    if (mpfr_cmp_ui(v.get(), 1) > 0) mpfr_set_ui(v.get(), 1, MPFR_RNDN);
}

inline void eval_target(const LipschitzMap1D& f, const BigFloat& x, BigFloat& out) {
    switch (f.family()) {
        case LipschitzMap1D::Family::Const: mpfr_set_d(out.get(), f.offset(), MPFR_RNDN); return;
        case LipschitzMap1D::Family::Identity: mpfr_set(out.get(), x.get(), MPFR_RNDN); return;
        case LipschitzMap1D::Family::Affine:
            mpfr_mul_d(out.get(), x.get(), f.slope(), MPFR_RNDN);
            mpfr_add_d(out.get(), out.get(), f.offset(), MPFR_RNDN);
            clamp_unit(out);
            return;
    }
}

inline void eval_target(const LipschitzMap2D& g, const BigFloat& x, const BigFloat& y, BigFloat& out) {
    switch (g.family()) {
        case LipschitzMap2D::Family::Const: mpfr_set_d(out.get(), g.coef_const(), MPFR_RNDN); return;
        case LipschitzMap2D::Family::Affine2: {
            BigFloat tmp(out.precision());
            mpfr_mul_d(out.get(), x.get(), g.coef_x(), MPFR_RNDN);
            mpfr_mul_d(tmp.get(), y.get(), g.coef_y(), MPFR_RNDN);
            mpfr_add(out.get(), out.get(), tmp.get(), MPFR_RNDN);
            mpfr_add_d(out.get(), out.get(), g.coef_const(), MPFR_RNDN);
            clamp_unit(out);
            return;
        }
        case LipschitzMap2D::Family::OfX: eval_target(g.inner(), x, out); return;
        case LipschitzMap2D::Family::OfY: eval_target(g.inner(), y, out); return;
    }
}

// |a - b| < e^log_threshold, decided without underflow.
inline bool log_below(const BigFloat& a, const BigFloat& b, BigFloat& scratch, double log_threshold) {
    mpfr_sub(scratch.get(), a.get(), b.get(), MPFR_RNDN);
    if (mpfr_zero_p(scratch.get())) return true;
    long e = 0;
    const double m = std::fabs(mpfr_get_d_2exp(&e, scratch.get(), MPFR_RNDN));
    return std::log(m) + static_cast<double>(e) * std::numbers::ln2 < log_threshold;
}

inline void t_step_hp(BigFloat& x, const BigFloat& beta) {
    mpfr_mul(x.get(), x.get(), beta.get(), MPFR_RNDN);
    mpfr_frac(x.get(), x.get(), MPFR_RNDN);
}

class SampleRunner {
public:
    explicit SampleRunner(const MeasureConfig& cfg) : cfg_(cfg) {
        two_lines_ = cfg.kind == SetKind::F || cfg.kind == SetKind::G;
        prec1_ = orbit_precision(cfg.base1.value(), cfg.window_hi);
        prec2_ = two_lines_ ? orbit_precision(cfg.base2.value(), cfg.window_hi) : prec1_;
        lb1_ = std::log(cfg.base1.value());
        lb2_ = std::log(cfg.base2.value());
    }

    long precision() const { return std::max(prec1_, prec2_); }

    bool hit(std::uint64_t sample) const {
        const BigFloat beta1 = cfg_.base1.to_bigfloat(prec1_);
        const BigFloat beta2 = cfg_.base2.to_bigfloat(prec2_);
        BigFloat x(prec1_), y(prec2_), cx(prec1_), cy(prec2_);
        BigFloat t1(prec1_), t2(prec2_), s1(prec1_), s2(prec2_);
        random_point(x, cfg_.seed, sample, 0);
        random_point(y, cfg_.seed, sample, 1);
        switch (cfg_.kind) {
            case SetKind::D: eval_target(cfg_.f1, x, t1); break;
            case SetKind::R: mpfr_set(t1.get(), x.get(), MPFR_RNDN); break;
            case SetKind::W: eval_target(cfg_.g1, x, y, t1); break;
            case SetKind::F:
                eval_target(cfg_.f1, x, t1);
                eval_target(cfg_.f2, y, t2);
                break;
            case SetKind::G:
                eval_target(cfg_.g1, x, y, t1);
                eval_target(cfg_.g2, x, y, t2);
                break;
        }
        const double e1 = cfg_.tau1(x.to_double());
        const double e2 = cfg_.tau2(y.to_double());
        mpfr_set(cx.get(), x.get(), MPFR_RNDN);
        mpfr_set(cy.get(), y.get(), MPFR_RNDN);
        for (std::size_t n = 1; n <= cfg_.window_hi; ++n) {
            t_step_hp(cx, beta1);
            if (two_lines_) t_step_hp(cy, beta2);
            if (n < cfg_.window_lo) continue;
            const double nd = static_cast<double>(n);
            if (!two_lines_) {
                if (log_below(cx, t1, s1, cfg_.phi.log_value(n))) return true;
            } else if (log_below(cx, t1, s1, -nd * e1 * lb1_) && log_below(cy, t2, s2, -nd * e2 * lb2_)) {
                return true;
            }
        }
        return false;
    }

    bool two_lines() const { return two_lines_; }

private:
    const MeasureConfig& cfg_;
    bool two_lines_ = false;
    long prec1_ = 0, prec2_ = 0;
    double lb1_ = 0.0, lb2_ = 0.0;
};

}  // namespace detail

/// Fraction of uniformly drawn points (in [0,1) or [0,1)^2) with at least one
/// hit in [window_lo, window_hi]. Orbits run in binary floating point with
/// ceil(window_hi * log2 beta) + 96 bits so that the last iterate still
/// carries about 96 correct bits. Bit-reproducible for a fixed configuration.
inline MeasureExperiment mc_measure_dichotomy(const MeasureConfig& cfg) {
    if (cfg.samples == 0) throw DomainError("samples must be >= 1");
    if (cfg.window_lo == 0 || !(cfg.window_lo < cfg.window_hi)) {
        throw DomainError("window needs 1 <= N0 < N1");
    }
    const bool two = cfg.kind == SetKind::F || cfg.kind == SetKind::G;
    const double work = static_cast<double>(cfg.samples) * static_cast<double>(cfg.window_hi) * (two ? 2.0 : 1.0);
    if (work > cfg.max_work) {
        throw BudgetExceeded("samples * N1 = " + detail::fmt(work) + " exceeds the work cap " + detail::fmt(cfg.max_work));
    }

    MeasureExperiment out;
    out.kind = cfg.kind;
    out.samples = cfg.samples;
    out.seed = cfg.seed;
    out.window_lo = cfg.window_lo;
    out.window_hi = cfg.window_hi;

    // Lebesgue measure is invariant for integer bases; otherwise the Parry
    // density sits in [1 - 1/beta, 1/(1 - 1/beta)], which costs (1 - 1/beta)^-2.
    auto distortion = [](const BaseSpec& b) {
        const double v = b.value();
        return v == std::floor(v) ? 1.0 : 1.0 / ((1.0 - 1.0 / v) * (1.0 - 1.0 / v));
    };
    double tail = 0.0;
    if (!two) {
        const double c = distortion(cfg.base1);
        for (std::size_t n = cfg.window_lo; n <= cfg.window_hi; ++n) tail += 2.0 * c * cfg.phi(n);
        out.series_convergent = cfg.phi.series_converges();
    } else {
        const double th1 = cfg.tau1.extrema().theta, th2 = cfg.tau2.extrema().theta;
        const double lb1 = std::log(cfg.base1.value()), lb2 = std::log(cfg.base2.value());
        for (std::size_t n = cfg.window_lo; n <= cfg.window_hi; ++n) {
            const double nd = static_cast<double>(n);
            tail += 4.0 * distortion(cfg.base1) * distortion(cfg.base2) * std::exp(-nd * (th1 * lb1 + th2 * lb2));
        }
        out.series_convergent = true;
    }
    out.tail_bound = tail;

    const detail::SampleRunner runner(cfg);
    out.precision_bits = runner.precision();
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, cfg.samples));
    std::atomic<std::size_t> hits{0};
    std::vector<std::thread> pool;
    const std::size_t chunk = (cfg.samples + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(cfg.samples, begin + chunk);
        pool.emplace_back([&, begin, end] {
            std::size_t local = 0;
            for (std::size_t i = begin; i < end; ++i) local += runner.hit(i) ? 1 : 0;
            hits += local;
        });
    }
    for (auto& th : pool) th.join();
    out.hits = hits.load();
    out.hit_fraction = static_cast<double>(out.hits) / static_cast<double>(cfg.samples);
    return out;
}

/// Experiments over the dyadic windows [2^k, 2^(k+1)] for k = k_lo..k_hi.
inline std::vector<MeasureExperiment> mc_window_trend(MeasureConfig cfg, int k_lo, int k_hi) {
    if (k_lo < 0 || k_hi < k_lo || k_hi > 40) throw DomainError("window exponents must satisfy 0 <= k_lo <= k_hi <= 40");
    std::vector<MeasureExperiment> out;
    for (int k = k_lo; k <= k_hi; ++k) {
        cfg.window_lo = std::size_t{1} << k;
        cfg.window_hi = std::size_t{1} << (k + 1);
        out.push_back(mc_measure_dichotomy(cfg));
    }
    return out;
}

}  // namespace betadyn
