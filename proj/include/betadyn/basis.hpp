#pragma once

#include <cmath>
#include <concepts>
#include <cstdio>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "betadyn/detail/bigfloat.hpp"
#include "betadyn/errors.hpp"
#include "betadyn/real.hpp"

namespace betadyn {

/// How a base was written: golden, e, a rational or a decimal. High-precision
/// consumers rebuild the base from this at any precision.
class BaseSpec {
public:
    enum class Kind { Float, Rational, Golden, Euler };

    static BaseSpec from_double(double beta) {
        BaseSpec s;
        s.kind_ = Kind::Float;
        s.value_ = beta;
        s.validate();
        return s;
    }
    static BaseSpec rational(const Rational& beta) {
        BaseSpec s;
        s.kind_ = Kind::Rational;
        s.rational_ = beta;
        s.value_ = to_double(beta);
        s.validate();
        return s;
    }
    static BaseSpec golden() {
        BaseSpec s;
        s.kind_ = Kind::Golden;
        s.value_ = (1.0 + std::sqrt(5.0)) / 2.0;
        return s;
    }
    static BaseSpec euler() {
        BaseSpec s;
        s.kind_ = Kind::Euler;
        s.value_ = std::exp(1.0);
        return s;
    }

    /// Accepts "golden" / "phi", "e", "p/q", integers and finite decimals
    /// (all exact), or anything std::stod understands (taken as a double).
    static BaseSpec parse(std::string_view text) {
        if (text == "golden" || text == "phi") return golden();
        if (text == "e") return euler();
        try {
            return rational(parse_rational(text));
        } catch (const DomainError&) {
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(std::string(text), &used);
        } catch (const std::exception&) {
            throw DomainError("cannot parse base '" + std::string(text) + "'");
        }
        if (used != text.size()) throw DomainError("cannot parse base '" + std::string(text) + "'");
        return from_double(v);
    }

    Kind kind() const { return kind_; }
    double value() const { return value_; }
    bool is_rational() const { return kind_ == Kind::Rational; }
    const Rational& rational_value() const {
        if (!is_rational()) throw PreconditionError("base " + text() + " is not rational");
        return rational_;
    }

    // Quasi-greedy iterations treat |y - k| < 2^-snap_bits as hitting the
    // integer k. Raw doubles only carry 53 bits, so algebraic coincidences
    // (the golden ratio typed as 1.618...) need a coarse threshold.
    int snap_bits() const { return kind_ == Kind::Float ? 40 : 300; }

    detail::BigFloat to_bigfloat(mpfr_prec_t bits) const {
        detail::BigFloat out(bits);
        switch (kind_) {
            case Kind::Float:
                mpfr_set_d(out.get(), value_, MPFR_RNDN);
                break;
            case Kind::Golden:
                mpfr_sqrt_ui(out.get(), 5, MPFR_RNDN);
                mpfr_add_ui(out.get(), out.get(), 1, MPFR_RNDN);
                mpfr_div_2ui(out.get(), out.get(), 1, MPFR_RNDN);
                break;
            case Kind::Euler:
                mpfr_set_ui(out.get(), 1, MPFR_RNDN);
                mpfr_exp(out.get(), out.get(), MPFR_RNDN);
                break;
            case Kind::Rational: {
                detail::BigFloat den(bits);
                mpfr_set_str(out.get(), boost::multiprecision::numerator(rational_).str().c_str(), 10,
                             MPFR_RNDN);
                mpfr_set_str(den.get(), boost::multiprecision::denominator(rational_).str().c_str(), 10,
                             MPFR_RNDN);
                mpfr_div(out.get(), out.get(), den.get(), MPFR_RNDN);
                break;
            }
        }
        return out;
    }

    std::string text() const {
        switch (kind_) {
            case Kind::Golden: return "golden";
            case Kind::Euler: return "e";
            case Kind::Rational: return rational_.str();
            case Kind::Float: break;
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", value_);
        return buf;
    }

private:
    void validate() const {
        if (!(value_ > 1.0) || !std::isfinite(value_)) {
            throw DomainError("base must satisfy beta > 1, got " + text());
        }
        if (kind_ == Kind::Rational && rational_ <= 1) {
            throw DomainError("base must satisfy beta > 1, got " + text());
        }
    }

    Kind kind_ = Kind::Float;
    double value_ = 2.0;
    Rational rational_{};
};

/// Quasi-greedy expansion of 1 truncated to some depth, together with the
/// remainders r_k = value of the shifted expansion (r_0 = 1). `resets[k]` is
/// true when r_k == 1, i.e. the expansion restarts after k digits.
struct ParryData {
    std::vector<int> digits;        // digits[k] is the (k+1)-th digit
    std::vector<char> resets;       // size depth + 1
    std::vector<double> remainders; // size depth + 1
};

/// A base beta > 1 bound to an arithmetic backend.
///
/// Real = double is the tolerance backend, Real = Rational the exact one
/// (only available for rational bases). The quasi-greedy expansion of 1 is
/// cached and extended on demand; copies of a basis share that cache, which
/// is append-only and guarded for concurrent readers.
template <class Real>
class BetaBasis {
public:
    static constexpr std::size_t kMaxFloatOrder = 40;
    static constexpr std::size_t kMaxFloatExpansionDepth = 200;

    explicit BetaBasis(BaseSpec spec) : spec_(std::move(spec)), cache_(std::make_shared<Cache>()) {
        if constexpr (RealTraits<Real>::exact) {
            beta_ = spec_.rational_value();
            const std::int64_t fl = RealTraits<Rational>::floor_int(beta_);
            max_digit_ = static_cast<int>(Rational(fl) == beta_ ? fl - 1 : fl);
            cache_->exact_remainder = Rational(1);
        } else {
            beta_ = spec_.value();
            const double log2b = std::log2(spec_.value());
            const auto bits = static_cast<mpfr_prec_t>(
                128 + spec_.snap_bits() + std::ceil(log2b * static_cast<double>(kMaxFloatExpansionDepth)));
            detail::BigFloat hp = spec_.to_bigfloat(bits);
            max_digit_ = mpfr_integer_p(hp.get()) ? static_cast<int>(mpfr_get_si(hp.get(), MPFR_RNDN)) - 1
                                                   : static_cast<int>(mpfr_get_si(hp.get(), MPFR_RNDD));
            cache_->hp_beta.emplace(std::move(hp));
            cache_->hp_remainder.emplace(bits, 1.0);
        }
        cache_->resets.push_back(1);
        cache_->remainders.push_back(1.0);
    }

    explicit BetaBasis(double beta)
        requires std::same_as<Real, double>
        : BetaBasis(BaseSpec::from_double(beta)) {}

    explicit BetaBasis(const Rational& beta)
        requires std::same_as<Real, Rational>
        : BetaBasis(BaseSpec::rational(beta)) {}

    static BetaBasis parse(std::string_view text) { return BetaBasis(BaseSpec::parse(text)); }

    const Real& beta() const { return beta_; }
    double value() const { return spec_.value(); }
    double log_beta() const { return std::log(spec_.value()); }
    int max_digit() const { return max_digit_; }
    const BaseSpec& spec() const { return spec_; }

    /// Largest cylinder order the backend supports.
    std::size_t max_order() const { return RealTraits<Real>::exact ? std::size_t{100000} : kMaxFloatOrder; }

    void check_order(std::size_t n) const {
        if (n == 0) throw DomainError("order n must be >= 1");
        if (n > max_order()) {
            throw RangeError("order " + std::to_string(n) + " exceeds backend maximum " + std::to_string(max_order()));
        }
    }

    /// First `depth` digits of the quasi-greedy expansion of 1.
    std::vector<int> one_expansion(std::size_t depth) const {
        ensure_depth(depth);
        std::shared_lock lock(cache_->mutex);
        return {cache_->digits.begin(), cache_->digits.begin() + static_cast<std::ptrdiff_t>(depth)};
    }

    ParryData parry_data(std::size_t depth) const {
        ensure_depth(depth);
        std::shared_lock lock(cache_->mutex);
        ParryData out;
        out.digits.assign(cache_->digits.begin(), cache_->digits.begin() + static_cast<std::ptrdiff_t>(depth));
        out.resets.assign(cache_->resets.begin(), cache_->resets.begin() + static_cast<std::ptrdiff_t>(depth + 1));
        out.remainders.assign(cache_->remainders.begin(),
                              cache_->remainders.begin() + static_cast<std::ptrdiff_t>(depth + 1));
        return out;
    }

    /// beta^-n in the backend's arithmetic.
    Real inverse_power(std::size_t n) const {
        Real out(1);
        for (std::size_t i = 0; i < n; ++i) out /= beta_;
        return out;
    }

private:
    struct Cache {
        std::shared_mutex mutex;
        std::vector<int> digits;
        std::vector<char> resets;
        std::vector<double> remainders;
        Rational exact_remainder;
        std::optional<detail::BigFloat> hp_beta;
        std::optional<detail::BigFloat> hp_remainder;
    };

    void ensure_depth(std::size_t depth) const {
        {
            std::shared_lock lock(cache_->mutex);
            if (cache_->digits.size() >= depth) return;
        }
        std::unique_lock lock(cache_->mutex);
        if constexpr (!RealTraits<Real>::exact) {
            if (depth > kMaxFloatExpansionDepth) {
                throw RangeError("float backend expands 1 to at most " + std::to_string(kMaxFloatExpansionDepth) +
                                 " digits");
            }
        }
        while (cache_->digits.size() < depth) extend_one();
    }

    // One step of x -> beta*x - d, d the largest digit leaving a remainder in (0, 1].
    void extend_one() const {
        Cache& c = *cache_;
        if constexpr (RealTraits<Real>::exact) {
            Rational y = beta_ * c.exact_remainder;
            std::int64_t d = RealTraits<Rational>::floor_int(y);
            if (Rational(d) == y) {
                --d;
            }
            c.exact_remainder = y - Rational(d);
            c.digits.push_back(static_cast<int>(d));
            c.resets.push_back(c.exact_remainder == 1 ? 1 : 0);
            c.remainders.push_back(to_double(c.exact_remainder));
        } else {
            detail::BigFloat& x = *c.hp_remainder;
            mpfr_mul(x.get(), x.get(), c.hp_beta->get(), MPFR_RNDN);
            detail::BigFloat nearest(x.precision());
            mpfr_rint(nearest.get(), x.get(), MPFR_RNDN);
            detail::BigFloat gap(x.precision());
            mpfr_sub(gap.get(), x.get(), nearest.get(), MPFR_RNDN);
            mpfr_abs(gap.get(), gap.get(), MPFR_RNDN);
            const bool on_integer = mpfr_cmp_ui(nearest.get(), 1) >= 0 &&
                                    mpfr_cmp_ui_2exp(gap.get(), 1, -spec_.snap_bits()) < 0;
            long d = 0;
            if (on_integer) {
                d = mpfr_get_si(nearest.get(), MPFR_RNDN) - 1;
                mpfr_set_ui(x.get(), 1, MPFR_RNDN);
                c.resets.push_back(1);
            } else {
                d = mpfr_get_si(x.get(), MPFR_RNDD);
                mpfr_sub_si(x.get(), x.get(), d, MPFR_RNDN);
                c.resets.push_back(0);
            }
            c.digits.push_back(static_cast<int>(d));
            c.remainders.push_back(x.to_double());
        }
    }

    BaseSpec spec_;
    Real beta_{};
    int max_digit_ = 1;
    std::shared_ptr<Cache> cache_;
};

using FloatBasis = BetaBasis<double>;
using ExactBasis = BetaBasis<Rational>;

}  // namespace betadyn
