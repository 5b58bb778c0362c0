#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "betadyn/betadyn.hpp"

namespace betadyn::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kValidation = 2, kResource = 3 };

/// Every flag of every subcommand. Unused fields keep their defaults.
struct Params {
    std::string command;
    std::string config;
    std::string format = "json";
    std::string out;
    unsigned threads = 0;

    std::string backend = "float";
    std::string beta = "2";
    std::string beta2 = "2";
    std::string x = "0";
    std::string y = "0";
    std::size_t n = 8;
    std::string word;
    bool full_only = false;

    std::string set = "D";
    std::string target = "const:0";
    std::string target2 = "const:0";
    std::string g = "const:0";
    std::string g2 = "const:0";
    std::string phi = "pow:1";
    std::string tau1 = "const:1";
    std::string tau2 = "const:1";
    std::size_t n_max = 20;

    std::string kind;
    double alpha = -1.0;
    double theta1 = 1.0;
    double theta2 = 1.0;
    std::string tau = "const:1";
    std::size_t horizon = 64;

    std::string a;
    std::string t;
    double eps = 0.0;

    double s = 1.5;
    bool critical = false;
    double s_lo = 1.01;
    double s_hi = 1.99;
    double tol = 1e-9;
    int simul_case = 1;
    int branch = 1;
    std::string count_mode = "auto";
    std::size_t scan_horizon = 400;

    std::size_t n0 = 1;
    std::size_t n1 = 200;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    std::string trend;

    std::string suite;
};

inline std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& piece : detail::split(text, ',')) out.push_back(detail::parse_number(piece, text));
    return out;
}

inline std::size_t enumeration_budget() {
    if (const char* env = std::getenv("BETADYN_BUDGET")) {
        try {
            const long long v = std::stoll(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        throw DomainError(std::string("BETADYN_BUDGET must be a positive integer, got '") + env + "'");
    }
    return kDefaultWordBudget;
}

/// Builds the command tree bound to `p`. Later occurrences of a flag win, so
/// values from --config (appended after the command line) override flags.
inline void build_app(CLI::App& app, Params& p) {
    app.description("beta-transformation dynamics: expansions, cylinders, hit scans, dimensions, covering sums");
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto common = [&](CLI::App* sub) {
        sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("--config", p.config, "JSON file whose fields override flags");
        sub->add_option("--format", p.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", p.out, "output path (default stdout)");
        sub->add_option("--threads", p.threads, "worker cap (0: all cores)");
    };
    auto base_opts = [&](CLI::App* sub) {
        sub->add_option("--beta", p.beta, "base: golden, e, p/q, decimal")->capture_default_str();
        sub->add_option("--backend", p.backend, "float or exact (rational bases only)")
            ->check(CLI::IsMember({"float", "exact"}))
            ->capture_default_str();
    };

    auto* expand = app.add_subcommand("expand", "digits and orbit of x");
    common(expand);
    base_opts(expand);
    expand->add_option("--x", p.x, "point in [0,1)")->capture_default_str();
    expand->add_option("--n", p.n, "number of digits")->capture_default_str();

    auto* cyl = app.add_subcommand("cylinders", "order-n cylinders, or one cylinder with --word");
    common(cyl);
    base_opts(cyl);
    cyl->add_option("--n", p.n, "order")->capture_default_str();
    cyl->add_option("--word", p.word, "single word such as 0101 or 10:3:0");
    cyl->add_flag("--full-only", p.full_only, "list only full cylinders");

    auto* hits = app.add_subcommand("hits", "finite-horizon hit scan for one point");
    common(hits);
    base_opts(hits);
    hits->add_option("--set", p.set, "D, R, W, F or G")->check(CLI::IsMember({"D", "R", "W", "F", "G"}))->capture_default_str();
    hits->add_option("--beta2", p.beta2, "second base (F, G)")->capture_default_str();
    hits->add_option("--x", p.x, "x in [0,1)")->capture_default_str();
    hits->add_option("--y", p.y, "y in [0,1)")->capture_default_str();
    hits->add_option("--target", p.target, "f or f1: const:c | id | affine:a:b")->capture_default_str();
    hits->add_option("--target2", p.target2, "f2 (F)")->capture_default_str();
    hits->add_option("--g", p.g, "g or g1: const:c | affine2:a:b:c | x | y | fx:<f> | fy:<f>")->capture_default_str();
    hits->add_option("--g2", p.g2, "g2 (G)")->capture_default_str();
    hits->add_option("--phi", p.phi, "pow:tau[:base] | geo:c:rho | poly:gamma | hlog | const:c | table:v,...")
        ->capture_default_str();
    hits->add_option("--tau1", p.tau1, "const:theta | affine:a:b:floor")->capture_default_str();
    hits->add_option("--tau2", p.tau2, "const:theta | affine:a:b:floor")->capture_default_str();
    hits->add_option("--nmax", p.n_max, "last index scanned")->capture_default_str();

    auto* dim = app.add_subcommand("dim", "closed-form dimensions and exponents");
    common(dim);
    dim->add_option("kind", p.kind, "shrinking | planar | simul | simul-inhom | alpha | tau")
        ->required()
        ->check(CLI::IsMember({"shrinking", "planar", "simul", "simul-inhom", "alpha", "tau"}));
    dim->add_option("--alpha", p.alpha, "alpha >= 0 (otherwise taken from --phi)");
    dim->add_option("--phi", p.phi, "rate function")->capture_default_str();
    dim->add_option("--beta", p.beta, "base for alpha")->capture_default_str();
    dim->add_option("--horizon", p.horizon, "horizon for the numeric alpha fallback")->capture_default_str();
    dim->add_option("--beta1", p.beta, "beta1")->capture_default_str();
    dim->add_option("--beta2", p.beta2, "beta2 >= beta1")->capture_default_str();
    dim->add_option("--theta1", p.theta1, "theta1 > 0")->capture_default_str();
    dim->add_option("--theta2", p.theta2, "theta2 > 0")->capture_default_str();
    dim->add_option("--tau1", p.tau1, "tau1")->capture_default_str();
    dim->add_option("--tau2", p.tau2, "tau2")->capture_default_str();
    dim->add_option("--tau", p.tau, "tau for the extrema query")->capture_default_str();

    auto* mtp = app.add_subcommand("mtp", "rectangle transference lower bound");
    common(mtp);
    mtp->add_option("--a", p.a, "comma-separated a_k > 0");
    mtp->add_option("--t", p.t, "comma-separated t_k >= 0");
    mtp->add_option("--beta1", p.beta, "build the two-dimensional problem from beta1, beta2, theta1, theta2");
    mtp->add_option("--beta2", p.beta2, "beta2");
    mtp->add_option("--theta1", p.theta1, "theta1");
    mtp->add_option("--theta2", p.theta2, "theta2");
    mtp->add_option("--eps", p.eps, "perturbation eps in [0,1)")->capture_default_str();

    auto* content = app.add_subcommand("content-scan", "covering-sum partial sums and critical exponents");
    common(content);
    content->add_option("--kind", p.kind, "thm1 (planar rate covering) or thm2 (simultaneous covering)")
        ->check(CLI::IsMember({"thm1", "thm2"}));
    content->add_option("--beta", p.beta, "base (thm1)")->capture_default_str();
    content->add_option("--phi", p.phi, "rate function (thm1)")->capture_default_str();
    content->add_option("--count-mode", p.count_mode, "auto | exact | renyi (thm1)")
        ->check(CLI::IsMember({"auto", "exact", "renyi"}))
        ->capture_default_str();
    content->add_option("--beta1", p.beta, "beta1 (thm2)");
    content->add_option("--beta2", p.beta2, "beta2 (thm2)");
    content->add_option("--theta1", p.theta1, "theta1 (thm2)");
    content->add_option("--theta2", p.theta2, "theta2 (thm2)");
    content->add_option("--case", p.simul_case, "1, 2 or 3 (thm2)")->check(CLI::Range(1, 3));
    content->add_option("--branch", p.branch, "1 or 2 (thm2)")->check(CLI::Range(1, 2));
    content->add_option("--s", p.s, "exponent for a single scan")->capture_default_str();
    content->add_flag("--critical", p.critical, "bisect for the critical exponent instead");
    content->add_option("--s-lo", p.s_lo, "bracket low end")->capture_default_str();
    content->add_option("--s-hi", p.s_hi, "bracket high end")->capture_default_str();
    content->add_option("--tol", p.tol, "rate tolerance")->capture_default_str();
    content->add_option("--horizon", p.scan_horizon, "number of terms N")->capture_default_str();

    auto* mc = app.add_subcommand("mc-measure", "Monte-Carlo hit fraction over a window");
    common(mc);
    mc->add_option("--set", p.set, "D, R, W, F or G")->check(CLI::IsMember({"D", "R", "W", "F", "G"}))->capture_default_str();
    mc->add_option("--beta", p.beta, "base (beta1)")->capture_default_str();
    mc->add_option("--beta2", p.beta2, "second base (F, G)")->capture_default_str();
    mc->add_option("--target", p.target, "f or f1")->capture_default_str();
    mc->add_option("--target2", p.target2, "f2")->capture_default_str();
    mc->add_option("--g", p.g, "g or g1")->capture_default_str();
    mc->add_option("--g2", p.g2, "g2")->capture_default_str();
    mc->add_option("--phi", p.phi, "rate function (D, R, W)")->capture_default_str();
    mc->add_option("--tau1", p.tau1, "tau1 (F, G)")->capture_default_str();
    mc->add_option("--tau2", p.tau2, "tau2 (F, G)")->capture_default_str();
    mc->add_option("--n0", p.n0, "window start")->capture_default_str();
    mc->add_option("--n1", p.n1, "window end")->capture_default_str();
    mc->add_option("--samples", p.samples, "number of samples")->capture_default_str();
    mc->add_option("--seed", p.seed, "generator seed")->capture_default_str();
    mc->add_option("--trend", p.trend, "k_lo,k_hi: run windows [2^k, 2^(k+1)] instead");

    auto* verify = app.add_subcommand("verify", "run a property suite");
    common(verify);
    verify->add_option("suite", p.suite, "renyi | fullgaps | mtp-thm2 | continuity | critical | reduction")
        ->required()
        ->check(CLI::IsMember(verify_suites()));
}

namespace detail {

template <class Real>
Real parse_point(const std::string& text) {
    if constexpr (RealTraits<Real>::exact) {
        return parse_rational(text);
    } else {
        try {
            return to_double(parse_rational(text));
        } catch (const DomainError&) {
            return betadyn::detail::parse_number(text, text);
        }
    }
}

inline void emit(const Params& p, const std::string& body, std::ostream& out) {
    if (p.out.empty()) {
        out << body;
        return;
    }
    std::ofstream f(p.out, std::ios::binary);
    if (!f) throw DomainError("cannot open output file '" + p.out + "'");
    f << body;
}

inline void require_json(const Params& p, const char* what) {
    if (p.format != "json") throw DomainError(std::string(what) + " only emits JSON");
}

template <class Real>
std::string run_expand(const Params& p, const BetaBasis<Real>& basis) {
    require_json(p, "expand");
    const Real x = parse_point<Real>(p.x);
    const Word w = digits(basis, x, p.n);
    const auto orbit = t_iterate(basis, x, p.n);
    Json j;
    j["beta"] = basis.spec().text();
    j["backend"] = RealTraits<Real>::provenance;
    j["x"] = to_double(x);
    j["n"] = p.n;
    j["digits"] = w.digits;
    Json orb = Json::array();
    for (const auto& v : orbit) orb.push_back(to_double(v));
    j["orbit"] = orb;
    if constexpr (RealTraits<Real>::exact) {
        Json exact = Json::array();
        for (const auto& v : orbit) exact.push_back(v.str());
        j["orbit_exact"] = exact;
    }
    j["provenance"] = RealTraits<Real>::provenance;
    return to_text(j);
}

template <class Real>
std::string run_cylinders(const Params& p, const BetaBasis<Real>& basis) {
    std::vector<CylinderInterval<Real>> cyls;
    if (!p.word.empty()) {
        cyls.push_back(cylinder_interval(basis, Word::parse(p.word)));
    } else {
        cyls = enumerate_cylinders(basis, p.n, enumeration_budget());
        if (p.full_only) std::erase_if(cyls, [](const auto& c) { return !c.is_full; });
    }
    if (p.format == "csv") {
        std::ostringstream os;
        write_cylinders_csv(os, cyls);
        return os.str();
    }
    Json j;
    j["beta"] = basis.spec().text();
    j["backend"] = RealTraits<Real>::provenance;
    j["count"] = cyls.size();
    Json arr = Json::array();
    for (const auto& c : cyls) arr.push_back(to_json(c));
    j["cylinders"] = arr;
    j["provenance"] = RealTraits<Real>::provenance;
    return to_text(j);
}

template <class Real>
std::string run_hits(const Params& p, const BetaBasis<Real>& b1, std::ostream& err) {
    const Real x = parse_point<Real>(p.x);
    const Real y = parse_point<Real>(p.y);
    const RateFunction phi = RateFunction::parse(p.phi, b1.value());
    std::vector<HitRecord> hits;
    bool two = false;
    if (p.set == "D") {
        hits = hits_1d(b1, x, LipschitzMap1D::parse(p.target), phi, p.n_max);
    } else if (p.set == "R") {
        hits = hits_1d(b1, x, LipschitzMap1D::identity(), phi, p.n_max);
    } else if (p.set == "W") {
        hits = hits_inhom_planar(b1, x, y, LipschitzMap2D::parse(p.g), phi, p.n_max);
    } else {
        two = true;
        const BetaBasis<Real> b2(BaseSpec::parse(p.beta2));
        if (auto w = simultaneous_order_warning(b1.value(), b2.value())) err << "warning: " << *w << '\n';
        const TauFunction t1 = TauFunction::parse(p.tau1), t2 = TauFunction::parse(p.tau2);
        if (p.set == "F") {
            hits = hits_simultaneous(b1, b2, x, y, LipschitzMap1D::parse(p.target), LipschitzMap1D::parse(p.target2),
                                     t1, t2, p.n_max);
        } else {
            hits = hits_simultaneous_inhom(b1, b2, x, y, LipschitzMap2D::parse(p.g), LipschitzMap2D::parse(p.g2), t1,
                                           t2, p.n_max);
        }
    }
    if (p.format == "csv") {
        std::ostringstream os;
        write_hits_csv(os, hits, two);
        return os.str();
    }
    Json j;
    j["set"] = p.set;
    j["beta"] = b1.spec().text();
    j["n_max"] = p.n_max;
    j["hits"] = to_json(hits);
    j["count"] = hits.size();
    j["provenance"] = RealTraits<Real>::provenance;
    return to_text(j);
}

inline std::string run_dim(const Params& p) {
    require_json(p, "dim");
    const double beta = BaseSpec::parse(p.beta).value();
    auto resolve_alpha = [&]() -> AlphaEstimate {
        if (p.alpha >= 0.0) return {p.alpha, true};
        return alpha_exponent(RateFunction::parse(p.phi, beta), beta, p.horizon);
    };
    Json j;
    if (p.kind == "shrinking" || p.kind == "planar") {
        const AlphaEstimate a = resolve_alpha();
        DimensionReport r;
        r.alpha = a.value;
        r.branch = p.kind == "shrinking" ? "1d" : "planar";
        r.value = p.kind == "shrinking" ? dim_shrinking_target(a.value) : dim_inhom_planar(a.value);
        r.branch_values = {{p.kind == "shrinking" ? "1/(1+alpha)" : "1+1/(1+alpha)", r.value}};
        r.provenance = a.provenance();
        j = to_json(r);
    } else if (p.kind == "simul") {
        j = to_json(dim_simultaneous(beta, BaseSpec::parse(p.beta2).value(), p.theta1, p.theta2));
    } else if (p.kind == "simul-inhom") {
        j = to_json(dim_simultaneous_inhom(beta, BaseSpec::parse(p.beta2).value(), TauFunction::parse(p.tau1),
                                           TauFunction::parse(p.tau2)));
    } else if (p.kind == "alpha") {
        const RateFunction phi = RateFunction::parse(p.phi, beta);
        const AlphaEstimate a = alpha_exponent(phi, beta, p.horizon);
        j = Json{{"alpha", a.value}, {"analytic", a.analytic}, {"phi", phi.describe()}, {"beta", beta},
                 {"provenance", a.provenance()}};
    } else {
        const TauFunction tau = TauFunction::parse(p.tau);
        const TauExtrema e = tau_extrema(tau);
        j = Json{{"theta", e.theta}, {"kappa", e.kappa}, {"tau", tau.describe()},
                 {"provenance", e.heuristic ? "heuristic" : "float"}};
    }
    return to_text(j);
}

inline std::string run_mtp(const Params& p) {
    require_json(p, "mtp");
    MtpProblem prob;
    if (!p.a.empty() || !p.t.empty()) {
        prob = MtpProblem{parse_list(p.a), parse_list(p.t)};
    } else {
        prob = mtp_simultaneous_problem(BaseSpec::parse(p.beta).value(), BaseSpec::parse(p.beta2).value(), p.theta1,
                                        p.theta2, p.eps);
    }
    Json j = to_json(mtp_lower_bound(prob));
    j["a"] = prob.a;
    j["t"] = prob.t;
    return to_text(j);
}

inline CountMode parse_count_mode(const std::string& s) {
    if (s == "exact") return CountMode::Exact;
    if (s == "renyi") return CountMode::Renyi;
    return CountMode::Auto;
}

inline std::string run_content(const Params& p) {
    if (p.kind.empty()) throw DomainError("content-scan needs --kind thm1 or --kind thm2");
    ScanSettings cfg;
    cfg.horizon = p.scan_horizon;
    if (cfg.tail_from >= cfg.horizon) cfg.tail_from = cfg.horizon / 2;
    FamilyFunction fam;
    Json inputs;
    if (p.kind == "thm1") {
        const FloatBasis basis(BaseSpec::parse(p.beta));
        const RateFunction phi = RateFunction::parse(p.phi, basis.value());
        fam = thm1_family(basis, phi, parse_count_mode(p.count_mode));
        inputs = Json{{"beta", basis.value()}, {"phi", phi.describe()}, {"count_mode", p.count_mode}};
    } else {
        const double b1 = BaseSpec::parse(p.beta).value(), b2 = BaseSpec::parse(p.beta2).value();
        fam = thm2_family(b1, b2, p.theta1, p.theta2, static_cast<SimulCase>(p.simul_case),
                          static_cast<ContentBranch>(p.branch));
        inputs = Json{{"beta1", b1}, {"beta2", b2}, {"theta1", p.theta1}, {"theta2", p.theta2},
                      {"case", p.simul_case}, {"branch", p.branch}};
    }
    if (p.critical) {
        require_json(p, "critical exponent scan");
        Json j = to_json(critical_exponent_scan(fam, p.s_lo, p.s_hi, p.tol, cfg));
        j["inputs"] = inputs;
        return to_text(j);
    }
    const ContentScan scan = content_scan(at_exponent(fam, p.s), p.s, cfg);
    if (p.format == "csv") {
        std::ostringstream os;
        write_content_csv(os, scan);
        return os.str();
    }
    Json j = to_json(scan);
    j["inputs"] = inputs;
    return to_text(j);
}

inline std::string run_mc(const Params& p) {
    require_json(p, "mc-measure");
    MeasureConfig cfg;
    cfg.kind = parse_set_kind(p.set);
    cfg.base1 = BaseSpec::parse(p.beta);
    cfg.base2 = BaseSpec::parse(p.beta2);
    cfg.f1 = LipschitzMap1D::parse(p.target);
    cfg.f2 = LipschitzMap1D::parse(p.target2);
    cfg.g1 = LipschitzMap2D::parse(p.g);
    cfg.g2 = LipschitzMap2D::parse(p.g2);
    cfg.phi = RateFunction::parse(p.phi, cfg.base1.value());
    cfg.tau1 = TauFunction::parse(p.tau1);
    cfg.tau2 = TauFunction::parse(p.tau2);
    cfg.window_lo = p.n0;
    cfg.window_hi = p.n1;
    cfg.samples = p.samples;
    cfg.seed = p.seed;
    cfg.threads = p.threads;
    if (!p.trend.empty()) {
        const auto ks = parse_list(p.trend);
        if (ks.size() != 2) throw DomainError("--trend needs k_lo,k_hi");
        Json arr = Json::array();
        for (const auto& e : mc_window_trend(cfg, static_cast<int>(ks[0]), static_cast<int>(ks[1]))) {
            arr.push_back(to_json(e));
        }
        return to_text(Json{{"experiments", arr}, {"provenance", "heuristic"}});
    }
    return to_text(to_json(mc_measure_dichotomy(cfg)));
}

// Experiment-document fields that expand into several flags.
inline bool expand_alias(const std::string& key, const Json& v, std::vector<std::string>& out) {
    auto pair = [&](const char* a, const char* b) {
        if (!v.is_array() || v.empty() || v.size() > 2) throw DomainError("config field '" + key + "' needs one or two entries");
        auto text = [](const Json& e) { return e.is_string() ? e.get<std::string>() : (e.is_number_float() ? format_number(e.get<double>()) : e.dump()); };
        out.insert(out.end(), {a, text(v[0])});
        if (v.size() == 2) out.insert(out.end(), {b, text(v[1])});
    };
    if (key == "set-kind") {
        out.insert(out.end(), {"--set", v.get<std::string>()});
    } else if (key == "window") {
        pair("--n0", "--n1");
    } else if (key == "bases") {
        pair("--beta", "--beta2");
    } else if (key == "targets") {
        pair("--target", "--target2");
    } else if (key == "rates") {
        if (v.is_string()) {
            out.insert(out.end(), {"--phi", v.get<std::string>()});
        } else {
            pair("--tau1", "--tau2");
        }
    } else {
        return false;
    }
    return true;
}

// Turns the fields of a config document into extra command-line tokens.
inline std::vector<std::string> config_tokens(const std::string& path, const CLI::App& sub) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot read config file '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw DomainError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw DomainError("config file must hold a JSON object");
    std::vector<std::string> out;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        std::string key = it.key();
        std::replace(key.begin(), key.end(), '_', '-');
        if (key == "command") {
            if (it.value() != sub.get_name()) {
                throw DomainError("config command '" + it.value().dump() + "' does not match '" + sub.get_name() + "'");
            }
            continue;
        }
        if (key == "config") throw DomainError("config files cannot nest");
        const Json& v = it.value();
        std::string value;
        if (v.is_string()) {
            value = v.get<std::string>();
        } else if (v.is_number_float()) {
            value = format_number(v.get<double>());
        } else if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                value += (i ? "," : "") + (v[i].is_number_float() ? format_number(v[i].get<double>()) : v[i].dump());
            }
        } else {
            value = v.dump();
        }
        if (sub.get_name() != "dim" && sub.get_name() != "content-scan" && expand_alias(key, v, out)) continue;
        const CLI::Option* opt = sub.get_option_no_throw("--" + key);
        if (opt != nullptr) {
            if (v.is_boolean()) {
                out.push_back("--" + key + "=" + value);
                continue;
            }
            out.push_back("--" + key);
            out.push_back(value);
        } else if (sub.get_option_no_throw(key) != nullptr) {
            out.push_back(value);
        } else {
            throw DomainError("unknown config field '" + key + "' for command '" + sub.get_name() + "'");
        }
    }
    return out;
}

inline std::string dispatch(const Params& p, const std::string& cmd, std::ostream& err, int& code) {
    code = kOk;
    if (cmd == "expand" || cmd == "cylinders" || cmd == "hits") {
        const BaseSpec spec = BaseSpec::parse(p.beta);
        if (p.backend == "exact") {
            if (!spec.is_rational()) throw DomainError("the exact backend needs a rational base, got " + spec.text());
            const ExactBasis basis(spec);
            if (cmd == "expand") return run_expand(p, basis);
            if (cmd == "cylinders") return run_cylinders(p, basis);
            return run_hits(p, basis, err);
        }
        const FloatBasis basis(spec);
        if (cmd == "expand") return run_expand(p, basis);
        if (cmd == "cylinders") return run_cylinders(p, basis);
        return run_hits(p, basis, err);
    }
    if (cmd == "dim") return run_dim(p);
    if (cmd == "mtp") return run_mtp(p);
    if (cmd == "content-scan") return run_content(p);
    if (cmd == "mc-measure") return run_mc(p);
    require_json(p, "verify");
    const VerifyReport r = run_verify_suite(p.suite);
    if (!r.passed()) code = kCheckFailed;
    return to_text(to_json(r));
}

}  // namespace detail

/// Entry point shared by the executable and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> argv = args;
    Params p;
    CLI::App app{"betadyn"};
    build_app(app, p);
    try {
        std::vector<std::string> rev(argv.rbegin(), argv.rend());
        app.parse(rev);
        CLI::App* sub = app.get_subcommands().front();
        std::string cmd = sub->get_name();
        if (!p.config.empty()) {
            std::vector<std::string> merged = argv;
            for (auto& tok : detail::config_tokens(p.config, *sub)) merged.push_back(std::move(tok));
            p = Params{};
            CLI::App again{"betadyn"};
            build_app(again, p);
            std::vector<std::string> rev2(merged.rbegin(), merged.rend());
            again.parse(rev2);
            cmd = again.get_subcommands().front()->get_name();
            p.command = cmd;
            int code = kOk;
            detail::emit(p, detail::dispatch(p, cmd, err, code), out);
            return code;
        }
        p.command = cmd;
        int code = kOk;
        detail::emit(p, detail::dispatch(p, cmd, err, code), out);
        return code;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kResource;
    } catch (const RangeError& e) {
        err << "error: " << e.what() << '\n';
        return kResource;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const Json::exception& e) {
        err << "error: malformed config value: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kCheckFailed;
    }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, out, err);
}

}  // namespace betadyn::cli
