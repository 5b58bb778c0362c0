#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "betadyn/content.hpp"
#include "betadyn/cylinders.hpp"
#include "betadyn/dimension.hpp"
#include "betadyn/hits.hpp"
#include "betadyn/monte_carlo.hpp"
#include "betadyn/real.hpp"

namespace betadyn {

using Json = nlohmann::ordered_json;

/// %.17g, with non-finite values spelled as JSON-safe strings by the caller.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline void dump_json(std::ostream& os, const Json& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << '{' << nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ',' << nl;
                first = false;
                os << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
                dump_json(os, it.value(), indent, depth + 1);
            }
            os << nl << close_pad << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << '[' << nl;
            bool first = true;
            for (const auto& v : j) {
                if (!first) os << ',' << nl;
                first = false;
                os << pad;
                dump_json(os, v, indent, depth + 1);
            }
            os << nl << close_pad << ']';
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isfinite(v)) {
                os << format_number(v);
            } else {
                os << (std::isnan(v) ? "\"nan\"" : (v > 0 ? "\"inf\"" : "\"-inf\""));
            }
            return;
        }
        default: os << j.dump(); return;
    }
}

}  // namespace detail

/// Serializes with every floating-point number at 17 significant digits.
inline std::string to_text(const Json& j, int indent = 2) {
    std::ostringstream os;
    detail::dump_json(os, j, indent, 0);
    os << '\n';
    return os.str();
}

template <class Real>
Json to_json(const CylinderInterval<Real>& c) {
    Json j;
    j["word"] = c.word.to_string();
    j["left"] = to_double(c.left);
    j["right"] = to_double(c.right);
    j["length"] = to_double(c.length());
    j["order"] = c.order;
    j["is_full"] = c.is_full;
    if constexpr (RealTraits<Real>::exact) {
        j["left_exact"] = c.left.str();
        j["right_exact"] = c.right.str();
    }
    j["provenance"] = RealTraits<Real>::provenance;
    return j;
}

inline Json to_json(const HitRecord& h) {
    Json j;
    j["n"] = h.n;
    j["dist1"] = h.distance;
    j["thresh1"] = h.threshold;
    if (h.two_lines) {
        j["dist2"] = h.distance2;
        j["thresh2"] = h.threshold2;
    }
    return j;
}

inline Json to_json(const std::vector<HitRecord>& hits) {
    Json arr = Json::array();
    for (const auto& h : hits) arr.push_back(to_json(h));
    return arr;
}

inline Json to_json(const DimensionReport& r) {
    Json j;
    j["value"] = r.value;
    j["case"] = r.branch;
    Json branches = Json::array();
    for (const auto& b : r.branch_values) branches.push_back({{"expression", b.name}, {"value", b.value}});
    j["branch_values"] = branches;
    Json inputs;
    if (r.branch.starts_with("case")) {
        inputs["beta1"] = r.beta1;
        inputs["beta2"] = r.beta2;
        inputs["theta1"] = r.theta1;
        inputs["theta2"] = r.theta2;
        inputs["lambda"] = r.lambda;
    }
    if (r.alpha) inputs["alpha"] = *r.alpha;
    j["inputs"] = inputs;
    if (r.applicable) j["applicable"] = *r.applicable;
    if (r.applicable_weak) j["applicable_non_strict"] = *r.applicable_weak;
    j["notes"] = r.notes;
    j["provenance"] = r.provenance;
    return j;
}

inline Json to_json(const MtpResult& r) {
    Json j;
    j["s"] = r.s;
    j["argmin"] = r.argmin_A;
    Json table = Json::array();
    for (const auto& e : r.per_A) {
        table.push_back({{"A", e.A}, {"K1", e.k1}, {"K2", e.k2}, {"K3", e.k3}, {"s_A", e.s_A}});
    }
    j["table"] = table;
    j["provenance"] = "float";
    return j;
}

inline Json to_json(const ContentScan& s) {
    Json j;
    j["s"] = s.s;
    j["verdict"] = verdict_name(s.verdict);
    j["average_rate"] = s.average_rate;
    j["tail"] = s.tail;
    j["terms"] = s.log_terms.size();
    j["final_partial_sum"] = s.partial_sums.empty() ? 0.0 : s.partial_sums.back();
    std::size_t exact = 0;
    for (char e : s.exact_count) exact += e ? 1 : 0;
    j["exact_count_terms"] = exact;
    j["provenance"] = "float";
    return j;
}

inline Json to_json(const CriticalScan& c) {
    return Json{{"s_star", c.s_star},     {"bracket", {c.bracket_lo, c.bracket_hi}},
                {"rate_lo", c.rate_lo},   {"rate_hi", c.rate_hi},
                {"rate_at_s_star", c.rate_at_star}, {"iterations", c.iterations},
                {"converged", c.converged}, {"provenance", "float"}};
}

inline Json to_json(const MeasureExperiment& m) {
    Json j;
    j["set_kind"] = set_kind_name(m.kind);
    j["samples"] = m.samples;
    j["seed"] = m.seed;
    j["window"] = {m.window_lo, m.window_hi};
    j["hits"] = m.hits;
    j["hit_fraction"] = m.hit_fraction;
    if (m.series_convergent) j["series_convergent"] = *m.series_convergent; else j["series_convergent"] = nullptr;
    j["tail_bound"] = m.tail_bound;
    j["precision_bits"] = m.precision_bits;
    j["provenance"] = "heuristic";
    return j;
}

/// CSV: word,left,right,length,is_full
template <class Real>
void write_cylinders_csv(std::ostream& os, const std::vector<CylinderInterval<Real>>& cyls) {
    os << "word,left,right,length,is_full\n";
    for (const auto& c : cyls) {
        os << c.word.to_string() << ',' << format_number(to_double(c.left)) << ','
           << format_number(to_double(c.right)) << ',' << format_number(to_double(c.length())) << ','
           << (c.is_full ? 1 : 0) << '\n';
    }
}

/// CSV: n,dist1,thresh1[,dist2,thresh2]
inline void write_hits_csv(std::ostream& os, const std::vector<HitRecord>& hits, bool two_lines) {
    os << (two_lines ? "n,dist1,thresh1,dist2,thresh2\n" : "n,dist1,thresh1\n");
    for (const auto& h : hits) {
        os << h.n << ',' << format_number(h.distance) << ',' << format_number(h.threshold);
        if (two_lines) os << ',' << format_number(h.distance2) << ',' << format_number(h.threshold2);
        os << '\n';
    }
}

/// CSV: n,term_log,partial_sum,rate (rate empty on the last row)
inline void write_content_csv(std::ostream& os, const ContentScan& s) {
    os << "n,term_log,partial_sum,rate\n";
    for (std::size_t k = 0; k < s.log_terms.size(); ++k) {
        os << (k + 1) << ',' << format_number(s.log_terms[k]) << ',' << format_number(s.partial_sums[k]) << ',';
        if (k < s.rates.size()) os << format_number(s.rates[k]);
        os << '\n';
    }
}

}  // namespace betadyn
