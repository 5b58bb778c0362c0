#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "betadyn/errors.hpp"
#include "betadyn/real.hpp"

namespace betadyn {

namespace detail {

inline std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = text.find(sep, start);
        out.emplace_back(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

inline double parse_number(const std::string& s, std::string_view context) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw DomainError("bad number '" + s + "' in '" + std::string(context) + "'");
    }
    if (used != s.size() || !std::isfinite(v)) {
        throw DomainError("bad number '" + s + "' in '" + std::string(context) + "'");
    }
    return v;
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

template <class Real>
Real clamp_unit(const Real& v) {
    if (v < Real(0)) return Real(0);
    if (v > Real(1)) return Real(1);
    return v;
}

}  // namespace detail

/// Approximation speed phi(n) > 0.
class RateFunction {
public:
    enum class Family { Pow, Geo, Poly, HarmonicLog, Constant, Table };

    /// phi(n) = base^(-n tau).
    static RateFunction pow(double tau, double base) {
        if (!(tau > 0.0)) throw DomainError("pow rate needs tau > 0");
        if (!(base > 1.0)) throw DomainError("pow rate needs a base > 1");
        return RateFunction(Family::Pow, {tau, base});
    }
    /// phi(n) = c * rho^n.
    static RateFunction geo(double c, double rho) {
        if (!(c > 0.0) || !(rho > 0.0 && rho < 1.0)) throw DomainError("geo rate needs c > 0 and 0 < rho < 1");
        return RateFunction(Family::Geo, {c, rho});
    }
    /// phi(n) = n^-gamma.
    static RateFunction poly(double gamma) {
        if (!(gamma >= 0.0)) throw DomainError("poly rate needs gamma >= 0");
        return RateFunction(Family::Poly, {gamma});
    }
    /// phi(n) = 1 / (n log^2(n+1)).
    static RateFunction harmonic_log() { return RateFunction(Family::HarmonicLog, {}); }
    static RateFunction constant(double c) {
        if (!(c > 0.0)) throw DomainError("constant rate needs c > 0");
        return RateFunction(Family::Constant, {c});
    }
    /// phi(n) = values[n-1]; undefined past the end of the table.
    static RateFunction table(std::vector<double> values) {
        if (values.empty()) throw DomainError("rate table is empty");
        for (double v : values) {
            if (!(v > 0.0)) throw DomainError("rate table entries must be positive");
        }
        return RateFunction(Family::Table, std::move(values));
    }

    /// Grammar: pow:tau[:base] | geo:c:rho | poly:gamma | hlog | const:c | table:v1,v2,...
    /// A pow rate without an explicit base binds to `default_base`.
    static RateFunction parse(std::string_view text, double default_base) {
        const auto parts = detail::split(text, ':');
        const std::string& kind = parts[0];
        auto num = [&](std::size_t i) { return detail::parse_number(parts.at(i), text); };
        try {
            if (kind == "pow" && (parts.size() == 2 || parts.size() == 3)) {
                return pow(num(1), parts.size() == 3 ? num(2) : default_base);
            }
            if (kind == "geo" && parts.size() == 3) return geo(num(1), num(2));
            if (kind == "poly" && parts.size() == 2) return poly(num(1));
            if (kind == "hlog" && parts.size() == 1) return harmonic_log();
            if (kind == "const" && parts.size() == 2) return constant(num(1));
            if (kind == "table" && parts.size() == 2) {
                std::vector<double> values;
                for (const auto& v : detail::split(parts[1], ',')) values.push_back(detail::parse_number(v, text));
                return table(std::move(values));
            }
        } catch (const std::out_of_range&) {
        }
        throw DomainError("cannot parse rate function '" + std::string(text) + "'");
    }

    Family family() const { return family_; }
    const std::vector<double>& params() const { return params_; }

    /// ln phi(n), exact in log space for the closed families.
    double log_value(std::size_t n) const {
        if (n == 0) throw DomainError("rate functions are defined for n >= 1");
        const double nd = static_cast<double>(n);
        switch (family_) {
            case Family::Pow: return -nd * params_[0] * std::log(params_[1]);
            case Family::Geo: return std::log(params_[0]) + nd * std::log(params_[1]);
            case Family::Poly: return -params_[0] * std::log(nd);
            case Family::HarmonicLog: return -std::log(nd) - 2.0 * std::log(std::log(nd + 1.0));
            case Family::Constant: return std::log(params_[0]);
            case Family::Table:
                if (n > params_.size()) {
                    throw RangeError("rate table has " + std::to_string(params_.size()) + " entries, asked for n = " +
                                     std::to_string(n));
                }
                return std::log(params_[n - 1]);
        }
        return 0.0;
    }

    double operator()(std::size_t n) const {
        if (family_ == Family::Table) {
            log_value(n);
            return params_[n - 1];
        }
        return std::exp(log_value(n));
    }

    /// Whether sum phi(n) converges, when known analytically.
    std::optional<bool> series_converges() const {
        switch (family_) {
            case Family::Pow:
            case Family::Geo:
            case Family::HarmonicLog: return true;
            case Family::Poly: return params_[0] > 1.0;
            case Family::Constant: return false;
            case Family::Table: return std::nullopt;
        }
        return std::nullopt;
    }

    /// liminf log_beta(1/phi(n)) / n for the closed families.
    std::optional<double> analytic_alpha(double beta) const {
        switch (family_) {
            case Family::Pow: return params_[0] * std::log(params_[1]) / std::log(beta);
            case Family::Geo: return -std::log(params_[1]) / std::log(beta);
            case Family::Poly:
            case Family::HarmonicLog:
            case Family::Constant: return 0.0;
            case Family::Table: return std::nullopt;
        }
        return std::nullopt;
    }

    std::string describe() const {
        switch (family_) {
            case Family::Pow: return "pow:" + detail::fmt(params_[0]) + ":" + detail::fmt(params_[1]);
            case Family::Geo: return "geo:" + detail::fmt(params_[0]) + ":" + detail::fmt(params_[1]);
            case Family::Poly: return "poly:" + detail::fmt(params_[0]);
            case Family::HarmonicLog: return "hlog";
            case Family::Constant: return "const:" + detail::fmt(params_[0]);
            case Family::Table: {
                std::string out = "table:";
                for (std::size_t i = 0; i < params_.size(); ++i) out += (i ? "," : "") + detail::fmt(params_[i]);
                return out;
            }
        }
        return {};
    }

private:
    RateFunction(Family f, std::vector<double> p) : family_(f), params_(std::move(p)) {}

    Family family_;
    std::vector<double> params_;
};

/// Lipschitz target f: [0,1] -> [0,1] of one variable.
class LipschitzMap1D {
public:
    enum class Family { Const, Identity, Affine };

    static LipschitzMap1D constant(double c) {
        if (!(c >= 0.0 && c <= 1.0)) throw DomainError("constant target must lie in [0,1]");
        return LipschitzMap1D(Family::Const, 0.0, c);
    }
    static LipschitzMap1D identity() { return LipschitzMap1D(Family::Identity, 1.0, 0.0); }
    /// clamp(a x + b, 0, 1).
    static LipschitzMap1D affine(double a, double b) { return LipschitzMap1D(Family::Affine, a, b); }

    /// const:c | id | affine:a:b
    static LipschitzMap1D parse(std::string_view text) {
        const auto parts = detail::split(text, ':');
        if (parts[0] == "id" && parts.size() == 1) return identity();
        if (parts[0] == "const" && parts.size() == 2) return constant(detail::parse_number(parts[1], text));
        if (parts[0] == "affine" && parts.size() == 3) {
            return affine(detail::parse_number(parts[1], text), detail::parse_number(parts[2], text));
        }
        throw DomainError("cannot parse target '" + std::string(text) + "'");
    }

    template <class Real>
    Real operator()(const Real& x) const {
        switch (family_) {
            case Family::Const: return Real(b_);
            case Family::Identity: return x;
            case Family::Affine: return detail::clamp_unit(Real(Real(a_) * x + Real(b_)));
        }
        return x;
    }

    double lipschitz_bound() const { return family_ == Family::Affine ? std::fabs(a_) : (family_ == Family::Identity ? 1.0 : 0.0); }
    Family family() const { return family_; }
    double slope() const { return a_; }
    double offset() const { return b_; }

    std::string describe() const {
        switch (family_) {
            case Family::Const: return "const:" + detail::fmt(b_);
            case Family::Identity: return "id";
            case Family::Affine: return "affine:" + detail::fmt(a_) + ":" + detail::fmt(b_);
        }
        return {};
    }

private:
    LipschitzMap1D(Family f, double a, double b) : family_(f), a_(a), b_(b) {}

    Family family_;
    double a_;
    double b_;
};

/// Lipschitz target g: [0,1]^2 -> [0,1]; the bound is with respect to the
/// Euclidean norm.
class LipschitzMap2D {
public:
    enum class Family { Const, Affine2, OfX, OfY };

    static LipschitzMap2D constant(double c) { return LipschitzMap2D(Family::Const, 0, 0, c, LipschitzMap1D::constant(c)); }
    /// clamp(a x + b y + c, 0, 1).
    static LipschitzMap2D affine2(double a, double b, double c) {
        return LipschitzMap2D(Family::Affine2, a, b, c, LipschitzMap1D::identity());
    }
    /// g(x, y) = f(x).
    static LipschitzMap2D of_x(LipschitzMap1D f) { return LipschitzMap2D(Family::OfX, 0, 0, 0, std::move(f)); }
    /// g(x, y) = f(y).
    static LipschitzMap2D of_y(LipschitzMap1D f) { return LipschitzMap2D(Family::OfY, 0, 0, 0, std::move(f)); }

    /// const:c | affine2:a:b:c | x | y | fx:<1d target> | fy:<1d target>
    static LipschitzMap2D parse(std::string_view text) {
        if (text == "x") return of_x(LipschitzMap1D::identity());
        if (text == "y") return of_y(LipschitzMap1D::identity());
        if (text.starts_with("fx:")) return of_x(LipschitzMap1D::parse(text.substr(3)));
        if (text.starts_with("fy:")) return of_y(LipschitzMap1D::parse(text.substr(3)));
        const auto parts = detail::split(text, ':');
        if (parts[0] == "const" && parts.size() == 2) return constant(detail::parse_number(parts[1], text));
        if (parts[0] == "affine2" && parts.size() == 4) {
            return affine2(detail::parse_number(parts[1], text), detail::parse_number(parts[2], text),
                           detail::parse_number(parts[3], text));
        }
        throw DomainError("cannot parse two-variable target '" + std::string(text) + "'");
    }

    template <class Real>
    Real operator()(const Real& x, const Real& y) const {
        switch (family_) {
            case Family::Const: return Real(c_);
            case Family::Affine2: return detail::clamp_unit(Real(Real(a_) * x + Real(b_) * y + Real(c_)));
            case Family::OfX: return inner_(x);
            case Family::OfY: return inner_(y);
        }
        return x;
    }

    double lipschitz_bound() const {
        switch (family_) {
            case Family::Const: return 0.0;
            case Family::Affine2: return std::hypot(a_, b_);
            case Family::OfX:
            case Family::OfY: return inner_.lipschitz_bound();
        }
        return 0.0;
    }

    Family family() const { return family_; }
    double coef_x() const { return a_; }
    double coef_y() const { return b_; }
    double coef_const() const { return c_; }
    const LipschitzMap1D& inner() const { return inner_; }

    std::string describe() const {
        switch (family_) {
            case Family::Const: return "const:" + detail::fmt(c_);
            case Family::Affine2: return "affine2:" + detail::fmt(a_) + ":" + detail::fmt(b_) + ":" + detail::fmt(c_);
            case Family::OfX: return "fx:" + inner_.describe();
            case Family::OfY: return "fy:" + inner_.describe();
        }
        return {};
    }

private:
    LipschitzMap2D(Family f, double a, double b, double c, LipschitzMap1D inner)
        : family_(f), a_(a), b_(b), c_(c), inner_(std::move(inner)) {}

    Family family_;
    double a_, b_, c_;
    LipschitzMap1D inner_;
};

struct TauExtrema {
    double theta;   // min over [0,1]
    double kappa;   // max over [0,1]
    bool heuristic; // true when found by sampling rather than in closed form
};

/// Local exponent tau: [0,1] -> (0, inf).
class TauFunction {
public:
    enum class Family { Const, AffineClamped, Custom };

    static TauFunction constant(double theta) {
        if (!(theta > 0.0)) throw DomainError("tau must be positive");
        return TauFunction(Family::Const, theta, 0, 0, {});
    }
    /// max(a x + b, floor) with floor > 0.
    static TauFunction affine_clamped(double a, double b, double floor) {
        if (!(floor > 0.0)) throw DomainError("affine tau needs a positive floor");
        return TauFunction(Family::AffineClamped, a, b, floor, {});
    }
    /// Any positive continuous function; extrema are then located numerically.
    static TauFunction custom(std::function<double(double)> fn) {
        return TauFunction(Family::Custom, 0, 0, 0, std::move(fn));
    }

    /// const:theta | affine:a:b:floor
    static TauFunction parse(std::string_view text) {
        const auto parts = detail::split(text, ':');
        if (parts[0] == "const" && parts.size() == 2) return constant(detail::parse_number(parts[1], text));
        if (parts[0] == "affine" && parts.size() == 4) {
            return affine_clamped(detail::parse_number(parts[1], text), detail::parse_number(parts[2], text),
                                  detail::parse_number(parts[3], text));
        }
        throw DomainError("cannot parse tau function '" + std::string(text) + "'");
    }

    double operator()(double x) const {
        switch (family_) {
            case Family::Const: return a_;
            case Family::AffineClamped: return std::max(a_ * x + b_, floor_);
            case Family::Custom: return fn_(x);
        }
        return a_;
    }

    Family family() const { return family_; }

    std::string describe() const {
        switch (family_) {
            case Family::Const: return "const:" + detail::fmt(a_);
            case Family::AffineClamped:
                return "affine:" + detail::fmt(a_) + ":" + detail::fmt(b_) + ":" + detail::fmt(floor_);
            case Family::Custom: return "custom";
        }
        return {};
    }

    /// (theta, kappa) = (min, max) of tau over [0,1].
    TauExtrema extrema() const {
        switch (family_) {
            case Family::Const: return {a_, a_, false};
            case Family::AffineClamped: {
                const double lo = std::min(b_, a_ + b_);
                const double hi = std::max(b_, a_ + b_);
                return {std::max(lo, floor_), std::max(hi, floor_), false};
            }
            case Family::Custom: return sampled_extrema();
        }
        return {a_, a_, false};
    }

private:
    TauFunction(Family f, double a, double b, double floor, std::function<double(double)> fn)
        : family_(f), a_(a), b_(b), floor_(floor), fn_(std::move(fn)) {}

    // Grid of 10^4 points followed by golden-section refinement around the best
    // grid cells.
    TauExtrema sampled_extrema() const {
        constexpr int kGrid = 10000;
        int imin = 0, imax = 0;
        double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
        for (int i = 0; i <= kGrid; ++i) {
            const double v = fn_(static_cast<double>(i) / kGrid);
            if (!(v > 0.0)) throw DomainError("tau must be positive on [0,1]");
            if (v < vmin) vmin = v, imin = i;
            if (v > vmax) vmax = v, imax = i;
        }
        auto refine = [&](int centre, double sign) {
            double lo = std::max(0, centre - 1) / static_cast<double>(kGrid);
            double hi = std::min(kGrid, centre + 1) / static_cast<double>(kGrid);
            const double g = (std::sqrt(5.0) - 1.0) / 2.0;
            for (int it = 0; it < 60; ++it) {
                const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
                if (sign * fn_(m1) < sign * fn_(m2)) hi = m2; else lo = m1;
            }
            return fn_(0.5 * (lo + hi));
        };
        vmin = std::min(vmin, refine(imin, 1.0));
        vmax = std::max(vmax, refine(imax, -1.0));
        if (!(vmin > 0.0)) throw DomainError("tau must be positive on [0,1]");
        return {vmin, vmax, true};
    }

    Family family_;
    double a_, b_, floor_;
    std::function<double(double)> fn_;
};

/// (theta, kappa) of tau; closed form for the built-in families.
inline TauExtrema tau_extrema(const TauFunction& tau) { return tau.extrema(); }

}  // namespace betadyn
