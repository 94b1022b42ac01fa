#include "bstab/cli.hpp"

#include "bstab/charges.hpp"
#include "bstab/exceptional.hpp"
#include "bstab/psi.hpp"
#include "bstab/quadforms.hpp"
#include "bstab/slopes.hpp"
#include "bstab/walls.hpp"
#include "bstab/witnesses.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

namespace bstab::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

/// Raised for failures that map to exit code 2.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Num {
    std::optional<Rational> exact;
    double approx = 0.0;
};

Num parse_num(const std::string& text, const char* what) {
    try {
        const ParsedReal p = parse_real(text);
        return {p.exact, p.approx};
    } catch (const ParseError& e) {
        throw ParseError(std::string("--") + what + ": " + e.what());
    }
}

bool all_exact(std::initializer_list<const Num*> xs) {
    return std::all_of(xs.begin(), xs.end(), [](const Num* n) { return n->exact.has_value(); });
}

template <Scalar T>
T get(const Num& n) {
    if constexpr (std::same_as<T, double>) {
        return n.approx;
    } else {
        return *n.exact;
    }
}

json jval(const Rational& r) { return format_rational(r); }

json jval(double x) {
    if (x == 0) return 0;
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) return static_cast<std::int64_t>(x);
    return x;
}

template <Scalar T>
json jopt(const std::optional<T>& x) {
    return x ? jval(*x) : json(nullptr);
}

json jclass(const ChernVector& v) { return format_class(v); }

json jtri(Tri t) {
    if (t == Tri::Unknown) return "unknown";
    return t == Tri::True;
}

ChernVector parse_class_opt(const std::string& text, const char* what) {
    try {
        return parse_class(text);
    } catch (const ParseError& e) {
        throw ParseError(std::string("--") + what + ": " + e.what());
    }
}

std::vector<double> parse_list(const std::string& text, std::size_t n, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_num(item, what).approx);
    if (out.size() != n) {
        throw ParseError(std::string("--") + what + " needs " + std::to_string(n) + " comma-separated values");
    }
    return out;
}

std::string dump(const json& j) { return j.dump() + "\n"; }

// ---------------------------------------------------------------- commands

struct ChargeArgs {
    std::string cls, alpha, beta, a, b, coeffs;
};

template <Scalar T>
json charge_json(const ChernVector& v, const ChargeSpec<T>& spec) {
    const Complex<T> z = z_eval(spec, v.cast<T>());
    const PhaseValue p = phase(z, 0);
    json j;
    j["re"] = jval(z.re);
    j["im"] = jval(z.im);
    j["phase_frac"] = jval(p.frac);
    j["phase_shift"] = p.shift;
    return j;
}

std::string run_charge(const ChargeArgs& a) {
    const ChernVector v = parse_class_opt(a.cls, "class");
    if (!a.coeffs.empty()) {
        std::vector<Num> c;
        std::stringstream ss(a.coeffs);
        std::string item;
        while (std::getline(ss, item, ',')) c.push_back(parse_num(item, "coeffs"));
        if (c.size() != 8) throw ParseError("--coeffs needs a1,a2,a3,a4,b1,b2,b3,b4");
        const bool exact = std::all_of(c.begin(), c.end(), [](const Num& n) { return n.exact.has_value(); });
        auto build = [&]<Scalar T>() {
            ChargeSpec<T> s;
            for (int k = 0; k < 4; ++k) {
                s.real_coeffs[k] = get<T>(c[k]);
                s.imag_coeffs[k] = get<T>(c[k + 4]);
            }
            return dump(charge_json(v, s));
        };
        return exact ? build.template operator()<Rational>() : build.template operator()<double>();
    }
    if (a.alpha.empty() || a.beta.empty()) throw ParseError("charge needs --alpha and --beta, or --coeffs");
    if (a.a.empty() != a.b.empty()) throw ParseError("--a and --b go together");
    const Num alpha = parse_num(a.alpha, "alpha"), beta = parse_num(a.beta, "beta");
    const bool full = !a.a.empty();
    const Num aa = full ? parse_num(a.a, "a") : Num{Rational(0), 0.0};
    const Num bb = full ? parse_num(a.b, "b") : Num{Rational(0), 0.0};
    if (!(alpha.approx > 0)) throw ParseError("--alpha must be positive");
    auto run = [&]<Scalar T>() {
        const ChargeSpec<T> s = full ? full_charge(get<T>(alpha), get<T>(beta), get<T>(aa), get<T>(bb))
                                     : tilt_charge(get<T>(alpha), get<T>(beta));
        return dump(charge_json(v, s));
    };
    return all_exact({&alpha, &beta, &aa, &bb}) ? run.template operator()<Rational>()
                                                : run.template operator()<double>();
}

struct BgArgs {
    std::string cls, alpha, beta;
};

std::string run_bg(const BgArgs& a, const Config& cfg) {
    const ChernVector v = parse_class_opt(a.cls, "class");
    const Num alpha = parse_num(a.alpha, "alpha"), beta = parse_num(a.beta, "beta");
    if (!(alpha.approx > 0)) throw ParseError("--alpha must be positive");
    auto run = [&]<Scalar T>() {
        const BasicChern<T> vt = v.cast<T>();
        const T al = get<T>(alpha), be = get<T>(beta);
        const BgReport r = bg_report(vt, al, be, cfg.tolerance);
        const ExtendedSlope<T> m = mu(vt, be), n = nu(vt, al, be);
        json j;
        j["classical"] = r.classical;
        j["generalized"] = r.generalized ? json(*r.generalized) : json(nullptr);
        j["bmt_strict"] = r.bmt_strict ? json(*r.bmt_strict) : json(nullptr);
        j["delta_bar"] = jval(delta_bar(vt));
        j["mu"] = m.is_infinite() ? json("+inf") : jval(*m.value);
        j["nu"] = n.is_infinite() ? json("+inf") : jval(*n.value);
        j["trichotomy"] = std::string(to_string(trichotomy(vt, al, be, cfg.tolerance)));
        return dump(j);
    };
    return all_exact({&alpha, &beta}) ? run.template operator()<Rational>() : run.template operator()<double>();
}

struct IntervalArgs {
    std::string alpha, beta, a, b, contains, delta;
};

std::string run_interval(const IntervalArgs& a, const Config& cfg, int& status) {
    const double alpha = parse_num(a.alpha, "alpha").approx, beta = parse_num(a.beta, "beta").approx;
    const double aa = parse_num(a.a, "a").approx, bb = parse_num(a.b, "b").approx;
    if (!(alpha > 0)) throw ParseError("--alpha must be positive");
    const SupportInterval si = support_interval(alpha, beta, aa, bb, cfg.tolerance);
    const double center = (alpha * alpha + 6 * aa) / 2;
    json j;
    j["empty"] = si.empty;
    j["k_min"] = si.empty ? json(nullptr) : (si.k_min ? jval(*si.k_min) : json("-inf"));
    j["k_max"] = si.empty ? json(nullptr) : (si.k_max ? jval(*si.k_max) : json("+inf"));
    j["center"] = jval(center);
    j["contains_center"] = si.contains(center);
    if (!a.contains.empty()) {
        const double k = parse_num(a.contains, "contains").approx;
        j["contains"] = si.contains(k);
        if (!si.contains(k)) status = 2;
    }
    if (!a.delta.empty()) {
        const double delta = parse_num(a.delta, "delta").approx;
        j["epsilon"] = jopt(find_epsilon(delta, alpha, beta, aa, bb));
    }
    return dump(j);
}

struct MonotoneFormArgs {
    std::string cls, alpha, beta, a, b, c;
};

std::string run_monotone_form(const MonotoneFormArgs& a, const Config& cfg) {
    const ChernVector v = parse_class_opt(a.cls, "class");
    const Num alpha = parse_num(a.alpha, "alpha"), beta = parse_num(a.beta, "beta");
    const Num aa = parse_num(a.a, "a"), bb = parse_num(a.b, "b"), c = parse_num(a.c, "c");
    if (!(alpha.approx > 0)) throw ParseError("--alpha must be positive");
    if (c.approx < 0) throw ParseError("--c must be non-negative");
    auto run = [&]<Scalar T>() {
        const ImZResult<T> r =
            im_zprime_zbar(v.cast<T>(), get<T>(alpha), get<T>(beta), get<T>(aa), get<T>(bb), get<T>(c), cfg.tolerance);
        json j;
        j["value"] = jval(r.value);
        j["expansion"] = jval(r.expansion);
        j["expansion_ok"] = r.expansion_ok;
        return dump(j);
    };
    return all_exact({&alpha, &beta, &aa, &bb, &c}) ? run.template operator()<Rational>()
                                                     : run.template operator()<double>();
}

struct PsiArgs {
    std::string alpha, beta, a, b;
    long box = 0;
    double window = 0.0;
    bool semi_homogeneous = false;
};

PsiOptions psi_options(const PsiArgs& a, const Config& cfg) {
    PsiOptions o;
    o.box_bound = a.box > 0 ? a.box : cfg.box_bound;
    o.nu_window = a.window > 0 ? a.window : cfg.nu_window;
    o.semi_homogeneous = a.semi_homogeneous;
    o.workers = cfg.workers;
    o.tol = cfg.tolerance;
    return o;
}

template <Scalar T>
json psi_json(const PsiEstimate<T>& e) {
    json j;
    j["closed_form"] = jval(e.closed_form);
    j["lower"] = jopt(e.lower);
    j["upper"] = jopt(e.upper);
    j["lower_witness"] = e.lower_witness ? jclass(*e.lower_witness) : json(nullptr);
    j["lower_label"] = e.lower_label;
    j["upper_witness"] = e.upper_witness ? jclass(*e.upper_witness) : json(nullptr);
    j["mid_bound"] = jval(e.mid_bound);
    j["nu_window"] = jval(e.nu_window);
    j["box_bound"] = e.box_bound;
    return j;
}

std::string run_psi(const PsiArgs& a, const Config& cfg) {
    const Num alpha = parse_num(a.alpha, "alpha"), beta = parse_num(a.beta, "beta"), b = parse_num(a.b, "b");
    if (!(alpha.approx > 0)) throw ParseError("--alpha must be positive");
    const PsiOptions o = psi_options(a, cfg);
    auto run = [&]<Scalar T>() { return dump(psi_json(psi_estimate(get<T>(alpha), get<T>(beta), get<T>(b), o))); };
    return all_exact({&alpha, &beta, &b}) ? run.template operator()<Rational>() : run.template operator()<double>();
}

std::string run_region(const PsiArgs& a, const Config& cfg) {
    const Num alpha = parse_num(a.alpha, "alpha"), beta = parse_num(a.beta, "beta");
    const Num aa = parse_num(a.a, "a"), b = parse_num(a.b, "b");
    if (!(alpha.approx > 0)) throw ParseError("--alpha must be positive");
    const PsiOptions o = psi_options(a, cfg);
    const bool p3 = cfg.variety.euler_enabled;
    auto run = [&]<Scalar T>() {
        const PsiEstimate<T> e = psi_estimate(get<T>(alpha), get<T>(beta), get<T>(b), o);
        const RegionFlags f = region_membership(get<T>(alpha), get<T>(aa), get<T>(b), e, p3);
        json j;
        j["in_B"] = jtri(f.in_B);
        j["in_B_Psi"] = jtri(f.in_B_Psi);
        j["in_B_star_Psi"] = jtri(f.in_B_star_Psi);
        j["psi_proxy"] = p3 ? "closed_form" : "bracket";
        j["psi"] = psi_json(e);
        return dump(j);
    };
    return all_exact({&alpha, &beta, &aa, &b}) ? run.template operator()<Rational>()
                                                : run.template operator()<double>();
}

std::string run_boundary(const PsiArgs& a, const Config& cfg) {
    const Num alpha = parse_num(a.alpha, "alpha"), beta = parse_num(a.beta, "beta");
    const Num aa = parse_num(a.a, "a"), b = parse_num(a.b, "b");
    if (!(alpha.approx > 0)) throw ParseError("--alpha must be positive");
    const long box = a.box > 0 ? a.box : cfg.box_bound;
    auto run = [&]<Scalar T>() {
        const auto ws = boundary_witness_search(get<T>(alpha), get<T>(beta), get<T>(aa), get<T>(b), box, cfg.tolerance);
        json j;
        j["witnesses"] = json::array();
        for (const auto& w : ws) j["witnesses"].push_back(jclass(w));
        j["box_bound"] = box;
        return dump(j);
    };
    return all_exact({&alpha, &beta, &aa, &b}) ? run.template operator()<Rational>()
                                                : run.template operator()<double>();
}

struct WallArgs {
    std::string v, w, beta_range = "-3:3";
    int samples = 200;
};

std::string wall_svg(const WallCurve<Rational>& c, double lo, double hi) {
    double top = 1.0;
    for (const auto& [b, a] : c.samples) top = std::max(top, a);
    top = std::ceil(top);
    const double scale = 100.0, margin = 20.0;
    const double width = (hi - lo) * scale + 2 * margin, height = top * scale + 2 * margin;
    auto x = [&](double b) { return margin + (b - lo) * scale; };
    auto y = [&](double a) { return margin + (top - a) * scale; };
    std::ostringstream s;
    s << std::setprecision(6);
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    for (long k = static_cast<long>(std::ceil(lo)); k <= static_cast<long>(std::floor(hi)); ++k) {
        s << "<line x1=\"" << x(k) << "\" y1=\"" << y(0) << "\" x2=\"" << x(k) << "\" y2=\"" << y(top)
          << "\" stroke=\"#ddd\"/>\n";
    }
    for (long k = 0; k <= static_cast<long>(top); ++k) {
        s << "<line x1=\"" << x(lo) << "\" y1=\"" << y(k) << "\" x2=\"" << x(hi) << "\" y2=\"" << y(k)
          << "\" stroke=\"" << (k == 0 ? "#000" : "#ddd") << "\"/>\n";
    }
    // Break the polyline where consecutive samples are not neighbours on the grid.
    const double step = c.samples.size() > 1 ? (hi - lo) / static_cast<double>(c.samples.size()) : hi - lo;
    std::vector<std::string> runs(1);
    for (std::size_t i = 0; i < c.samples.size(); ++i) {
        if (i > 0 && std::abs(c.samples[i].first - c.samples[i - 1].first) > 3 * step + 1e-12) runs.emplace_back();
        std::ostringstream p;
        p << std::setprecision(6) << x(c.samples[i].first) << "," << y(c.samples[i].second) << " ";
        runs.back() += p.str();
    }
    for (const auto& r : runs) {
        if (!r.empty()) s << "<polyline fill=\"none\" stroke=\"#c00\" points=\"" << r << "\"/>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string run_wall(const WallArgs& a, const Config& cfg) {
    const ChernVector v = parse_class_opt(a.v, "v"), w = parse_class_opt(a.w, "w");
    const auto colon = a.beta_range.find(':');
    if (colon == std::string::npos) throw ParseError("--beta-range needs lo:hi");
    const double lo = parse_num(a.beta_range.substr(0, colon), "beta-range").approx;
    const double hi = parse_num(a.beta_range.substr(colon + 1), "beta-range").approx;
    if (!(lo < hi)) throw ParseError("--beta-range needs lo < hi");
    if (a.samples < 2) throw ParseError("--samples must be at least 2");
    WallCurve<Rational> c = wall_conic(v, w);
    sample_wall(c, lo, hi, a.samples);
    if (cfg.output == OutputFormat::Csv) {
        std::string out = "beta,alpha\n";
        for (const auto& [b, al] : c.samples) out += format_real(b) + "," + format_real(al) + "\n";
        return out;
    }
    if (cfg.output == OutputFormat::Svg) return wall_svg(c, lo, hi);
    json j;
    j["v"] = jclass(v);
    j["w"] = jclass(w);
    j["identically_zero"] = c.identically_zero;
    j["coefficients"] = json::array();
    for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 2; ++k) {
            if (c.coeff[i][k] == 0) continue;
            json t;
            t["beta_pow"] = i;
            t["alpha2_pow"] = k;
            t["value"] = jval(c.coeff[i][k]);
            j["coefficients"].push_back(t);
        }
    }
    if (const auto circ = circle_form(c)) {
        j["circle"] = {{"center_beta", jval(circ->center)}, {"radius_squared", jval(circ->radius2)}};
    } else {
        j["circle"] = nullptr;
    }
    j["samples"] = json::array();
    for (const auto& [b, al] : c.samples) j["samples"].push_back({jval(b), jval(al)});
    return dump(j);
}

struct DestabArgs {
    std::string cls, alpha, beta;
    long box = 0;
};

std::string run_destab(const DestabArgs& a, const Config& cfg) {
    const ChernVector v = parse_class_opt(a.cls, "class");
    const Num alpha = parse_num(a.alpha, "alpha"), beta = parse_num(a.beta, "beta");
    if (!(alpha.approx > 0)) throw ParseError("--alpha must be positive");
    const long box = a.box > 0 ? a.box : cfg.box_bound;
    auto run = [&]<Scalar T>() {
        const auto ws = destabilizer_search(v.cast<T>(), get<T>(alpha), get<T>(beta), box, cfg.workers, cfg.tolerance);
        json j;
        j["destabilizers"] = json::array();
        for (const auto& w : ws) j["destabilizers"].push_back(jclass(w));
        j["box_bound"] = box;
        j["note"] = "ch3 is not constrained; classes carry ch3 = 0";
        return dump(j);
    };
    return all_exact({&alpha, &beta}) ? run.template operator()<Rational>() : run.template operator()<double>();
}

struct ExcArgs {
    std::string collection = "beilinson:0";
    std::vector<std::string> mutations;
    std::string m = "1,1,1,1";
    std::string phi;
};

ExcCollection build_from_args(const ExcArgs& a) {
    const auto colon = a.collection.find(':');
    if (a.collection.substr(0, colon) != "beilinson" || colon == std::string::npos) {
        throw ParseError("--collection must be beilinson:k");
    }
    const Rational k = parse_rational(a.collection.substr(colon + 1));
    if (floor_of(k) != k) throw ParseError("--collection index must be an integer");
    ExcCollection c = beilinson(k.convert_to<long>());
    for (const auto& m : a.mutations) {
        const auto sep = m.find(':');
        if (sep == std::string::npos) throw ParseError("--mutate needs i:left or i:right");
        const Rational i = parse_rational(m.substr(0, sep));
        const std::string dir = m.substr(sep + 1);
        if (floor_of(i) != i) throw ParseError("--mutate index must be an integer");
        if (dir != "left" && dir != "right") throw ParseError("--mutate direction must be left or right");
        c = mutate(c, i.convert_to<int>(), dir == "left" ? Mutation::Left : Mutation::Right);
    }
    return c;
}

json gldim_json(const GldimResult& r) {
    json j;
    j["lower_bound"] = r.found ? jval(r.lower_bound) : json(nullptr);
    j["max_gap"] = jval(r.max_gap);
    j["attaining_pair"] =
        r.found ? json{{"source", r.attaining_source}, {"target", r.attaining_target}, {"degree", r.attaining_degree}}
                : json(nullptr);
    j["hints_used"] = r.hints_used;
    j["unsupported_pairs"] = r.unsupported_pairs;
    return j;
}

std::string run_exc(const ExcArgs& a, const Config& cfg) {
    const ExcCollection c = build_from_args(a);
    json j;
    j["classes"] = json::array();
    for (const auto& v : c.classes) j["classes"].push_back(jclass(v));
    j["names"] = c.names;
    j["exceptional"] = check_exceptional(c, cfg.variety);
    if (!a.phi.empty()) {
        AlgebraicDatum d;
        const auto m = parse_list(a.m, 4, "m");
        const auto phi = parse_list(a.phi, 4, "phi");
        std::copy(m.begin(), m.end(), d.m.begin());
        std::copy(phi.begin(), phi.end(), d.phi.begin());
        const ThetaMembership t = theta_membership(d);
        j["in_theta"] = t.in_theta;
        j["in_theta_star"] = t.in_theta_star;
        const ChargeSpec<double> s = algebraic_charge(c, d);
        json re = json::array(), im = json::array();
        for (int k = 0; k < 4; ++k) {
            re.push_back(jval(s.real_coeffs[k]));
            im.push_back(jval(s.imag_coeffs[k]));
        }
        j["charge"] = {{"real_coeffs", re}, {"imag_coeffs", im}};
        j["residual"] = jval(algebraic_residual(c, d, s));
        try {
            j["gldim"] = gldim_json(gldim_scan_algebraic(c, d));
        } catch (const UnsupportedPair&) {
            j["gldim"] = nullptr;
        }
    }
    return dump(j);
}

struct GldimArgs {
    std::string alpha, beta, a, b, corpus;
};

std::string run_gldim(const GldimArgs& a, const Config& cfg) {
    const double alpha = parse_num(a.alpha, "alpha").approx, beta = parse_num(a.beta, "beta").approx;
    const double aa = parse_num(a.a, "a").approx, bb = parse_num(a.b, "b").approx;
    if (!(alpha > 0)) throw ParseError("--alpha must be positive");
    std::vector<WitnessObject> corpus;
    if (a.corpus.empty()) {
        corpus = default_corpus(beta);
    } else {
        std::ifstream in(a.corpus);
        if (!in) throw ParseError("cannot open corpus file '" + a.corpus + "'");
        corpus = parse_corpus(in);
    }
    const GldimResult r = gldim_scan(alpha, beta, aa, bb, corpus, cfg.workers);
    json j = gldim_json(r);
    json ph = json::object();
    for (std::size_t i = 0; i < corpus.size(); ++i) ph[corpus[i].name()] = jval(r.phases[i]);
    j["phases"] = ph;
    return dump(j);
}

struct MonotoneArgs {
    std::string cls, alpha, beta, a, b, c = "1";
    double t_max = 1.0;
    int steps = 1024;
};

std::string run_monotone(const MonotoneArgs& a) {
    const ChernVector v = parse_class_opt(a.cls, "class");
    const double alpha = parse_num(a.alpha, "alpha").approx, beta = parse_num(a.beta, "beta").approx;
    const double aa = parse_num(a.a, "a").approx, bb = parse_num(a.b, "b").approx, c = parse_num(a.c, "c").approx;
    if (!(alpha > 0)) throw ParseError("--alpha must be positive");
    if (c < 0) throw ParseError("--c must be non-negative");
    const MonotonicityResult r = phase_monotonicity(v, alpha, beta, aa, bb, c, a.t_max, a.steps);
    json j;
    j["min_derivative"] = jval(r.min_derivative);
    j["matches_im_formula"] = r.matches_im_formula;
    j["derivative_at_zero"] = jval(r.derivative_at_zero);
    j["im_formula_at_zero"] = jval(r.im_formula_at_zero);
    j["phase_start"] = jval(r.phase_start);
    j["phase_end"] = jval(r.phase_end);
    return dump(j);
}

struct WindowArgs {
    std::string cls, beta;
    double alpha_max = 50.0;
    int steps = 1024;
};

std::string run_window(const WindowArgs& a) {
    const ChernVector v = parse_class_opt(a.cls, "class");
    const double beta = parse_num(a.beta, "beta").approx;
    const WindowResult r = large_volume_window(v, beta, a.alpha_max, a.steps);
    json j;
    j["limit_phase"] = jval(r.limit_phase);
    j["window_guess"] = {jval(r.window_lo), jval(r.window_hi)};
    j["initial_phase"] = jval(r.initial_phase);
    j["initial_shift"] = r.initial_shift;
    j["final_phase"] = jval(r.final_phase);
    return dump(j);
}

std::string run_witness(const std::string& kind) {
    const WitnessObject w = parse_witness(kind);
    json j;
    j["name"] = w.name();
    j["class"] = jclass(w.v);
    j["shift"] = w.shift;
    j["shifted_class"] = jclass(w.shifted_class());
    j["stable"] = w.stable;
    j["stable_hint"] = w.stable_hint;
    j["delta_bar"] = jval(delta_bar(w.v));
    return dump(j);
}

// ---------------------------------------------------------------- plumbing

VarietyData parse_variety(const std::string& s) {
    if (s == "p3") return VarietyData::p3();
    if (s.starts_with("generic:")) {
        const Rational d = parse_rational(s.substr(8));
        if (floor_of(d) != d || d < 1) throw ParseError("--variety generic:N needs an integer N >= 1");
        return VarietyData::generic(d.convert_to<int>());
    }
    throw ParseError("--variety must be p3 or generic:N");
}

std::string canonical_params(const CLI::App& sub) {
    std::map<std::string, std::string> kv;
    for (const CLI::Option* o : sub.get_options()) {
        if (o->count() == 0 || o->get_name() == "--help") continue;
        std::string joined;
        for (const auto& r : o->results()) joined += r + "\x1f";
        kv[o->get_name()] = joined;
    }
    std::string out = sub.get_name();
    for (const auto& [k, v] : kv) out += "\x1e" + k + "=" + v;
    return out;
}

std::string hex64(std::uint64_t x) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << x;
    return s.str();
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_fingerprint(const Config& c) {
    std::ostringstream s;
    s << c.variety_name << ';' << format_real(c.tolerance) << ';' << c.box_bound << ';' << format_real(c.nu_window)
      << ';' << static_cast<int>(c.output);
    return hex64(fnv1a(s.str()));
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical experiments with tilt and Bridgeland stability on P^3"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value configuration file");
    app.footer(
        "CSV output (wall --output csv): header `beta,alpha`, one sampled point of the\n"
        "numerical wall per row. Exit codes: 0 ok, 1 malformed input, 2 numeric failure.\n"
        "Cache directory: --cache-dir, or the BSTAB_CACHE_DIR environment variable.");

    Config cfg;
    cfg.workers = std::max(1u, std::thread::hardware_concurrency());
    std::string variety = "p3", output = "json", cache_dir;
    bool no_cache = false;
    app.add_option("--tolerance", cfg.tolerance, "comparison tolerance of the double backend")
        ->check(CLI::PositiveNumber);
    app.add_option("--box", cfg.box_bound, "default enumeration box bound")->check(CLI::PositiveNumber);
    app.add_option("--window", cfg.nu_window, "default nu window for psi")->check(CLI::PositiveNumber);
    app.add_option("--workers", cfg.workers, "worker threads for enumeration")->check(CLI::PositiveNumber);
    app.add_option("--variety", variety, "p3 or generic:N");
    app.add_option("--output", output, "json, csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));
    app.add_option("--cache-dir", cache_dir, "result cache directory");
    app.add_flag("--no-cache", no_cache, "bypass the result cache");

    std::function<std::string(int&)> action;

    ChargeArgs charge;
    auto* c_charge = app.add_subcommand("charge", "evaluate a central charge and its phase");
    c_charge->add_option("--class", charge.cls, "e0,e1,e2,e3")->required();
    c_charge->add_option("--alpha", charge.alpha);
    c_charge->add_option("--beta", charge.beta);
    c_charge->add_option("--a", charge.a);
    c_charge->add_option("--b", charge.b);
    c_charge->add_option("--coeffs", charge.coeffs, "a1,a2,a3,a4,b1,b2,b3,b4");
    c_charge->callback([&] { action = [&](int&) { return run_charge(charge); }; });

    BgArgs bg;
    auto* c_bg = app.add_subcommand("bg", "Bogomolov-Gieseker report, slopes and trichotomy");
    c_bg->add_option("--class", bg.cls)->required();
    c_bg->add_option("--alpha", bg.alpha)->required();
    c_bg->add_option("--beta", bg.beta)->required();
    c_bg->callback([&] { action = [&](int&) { return run_bg(bg, cfg); }; });

    IntervalArgs iv;
    auto* c_iv = app.add_subcommand("interval", "support interval of K, optional epsilon search");
    c_iv->add_option("--alpha", iv.alpha)->required();
    c_iv->add_option("--beta", iv.beta)->required();
    c_iv->add_option("--a", iv.a)->required();
    c_iv->add_option("--b", iv.b)->required();
    c_iv->add_option("--contains", iv.contains, "require K in the interval (exit 2 otherwise)");
    c_iv->add_option("--delta", iv.delta, "also search epsilon for S_{delta,eps}");
    c_iv->callback([&] { action = [&](int& st) { return run_interval(iv, cfg, st); }; });

    MonotoneFormArgs mf;
    auto* c_mf = app.add_subcommand("monotone-form", "Im(Z' conj Z) and its zeta expansion");
    c_mf->add_option("--class", mf.cls)->required();
    c_mf->add_option("--alpha", mf.alpha)->required();
    c_mf->add_option("--beta", mf.beta)->required();
    c_mf->add_option("--a", mf.a)->required();
    c_mf->add_option("--b", mf.b)->required();
    c_mf->add_option("--c", mf.c)->required();
    c_mf->callback([&] { action = [&](int&) { return run_monotone_form(mf, cfg); }; });

    PsiArgs psi;
    auto add_psi_common = [&](CLI::App* s, bool with_a) {
        s->add_option("--alpha", psi.alpha)->required();
        s->add_option("--beta", psi.beta)->required();
        if (with_a) s->add_option("--a", psi.a)->required();
        s->add_option("--b", psi.b)->required();
        s->add_option("--box", psi.box, "box bound (default from config)");
    };
    auto* c_psi = app.add_subcommand("psi", "Psi closed form, witness lower bound, feasibility upper bound");
    add_psi_common(c_psi, false);
    c_psi->add_option("--window", psi.window, "nu window (default from config)");
    c_psi->add_flag("--semi-homogeneous", psi.semi_homogeneous, "add semi-homogeneous witness classes");
    c_psi->callback([&] { action = [&](int&) { return run_psi(psi, cfg); }; });
    auto* c_region = app.add_subcommand("region", "membership in B, B_Psi and B*_Psi");
    add_psi_common(c_region, true);
    c_region->add_option("--window", psi.window);
    c_region->callback([&] { action = [&](int&) { return run_region(psi, cfg); }; });
    auto* c_bd = app.add_subcommand("boundary", "lattice classes in Ker Z with ch1^beta > 0");
    add_psi_common(c_bd, true);
    c_bd->callback([&] { action = [&](int&) { return run_boundary(psi, cfg); }; });

    WallArgs wall;
    auto* c_wall = app.add_subcommand("wall", "numerical wall nu(v) = nu(w) in the (beta, alpha) half plane");
    c_wall->add_option("--v", wall.v)->required();
    c_wall->add_option("--w", wall.w)->required();
    c_wall->add_option("--beta-range", wall.beta_range, "lo:hi");
    c_wall->add_option("--samples", wall.samples);
    c_wall->callback([&] { action = [&](int&) { return run_wall(wall, cfg); }; });

    DestabArgs ds;
    auto* c_ds = app.add_subcommand("destab", "candidate tilt-destabilizing subclasses");
    c_ds->add_option("--class", ds.cls)->required();
    c_ds->add_option("--alpha", ds.alpha)->required();
    c_ds->add_option("--beta", ds.beta)->required();
    c_ds->add_option("--box", ds.box);
    c_ds->callback([&] { action = [&](int&) { return run_destab(ds, cfg); }; });

    ExcArgs exc;
    auto* c_exc = app.add_subcommand("exc", "exceptional collections and algebraic stability data");
    c_exc->add_option("--collection", exc.collection, "beilinson:k");
    c_exc->add_option("--mutate", exc.mutations, "i:left or i:right, applied in order");
    c_exc->add_option("--m", exc.m, "m1,m2,m3,m4");
    c_exc->add_option("--phi", exc.phi, "phi1,phi2,phi3,phi4");
    c_exc->callback([&] { action = [&](int&) { return run_exc(exc, cfg); }; });

    GldimArgs gd;
    auto* c_gd = app.add_subcommand("gldim", "global-dimension lower bound from the Hom-fact corpus");
    c_gd->add_option("--alpha", gd.alpha)->required();
    c_gd->add_option("--beta", gd.beta)->required();
    c_gd->add_option("--a", gd.a)->required();
    c_gd->add_option("--b", gd.b)->required();
    c_gd->add_option("--corpus", gd.corpus, "file with one `kind:params[shift]` per line");
    c_gd->callback([&] { action = [&](int&) { return run_gldim(gd, cfg); }; });

    MonotoneArgs mo;
    auto* c_mo = app.add_subcommand("monotone", "phase along beta -> beta - t c");
    c_mo->add_option("--class", mo.cls)->required();
    c_mo->add_option("--alpha", mo.alpha)->required();
    c_mo->add_option("--beta", mo.beta)->required();
    c_mo->add_option("--a", mo.a)->required();
    c_mo->add_option("--b", mo.b)->required();
    c_mo->add_option("--c", mo.c);
    c_mo->add_option("--t-max", mo.t_max)->check(CLI::NonNegativeNumber);
    c_mo->add_option("--steps", mo.steps)->check(CLI::PositiveNumber);
    c_mo->callback([&] { action = [&](int&) { return run_monotone(mo); }; });

    WindowArgs wn;
    auto* c_wn = app.add_subcommand("window", "large-volume limit of the tilt phase");
    c_wn->add_option("--class", wn.cls)->required();
    c_wn->add_option("--beta", wn.beta)->required();
    c_wn->add_option("--alpha-max", wn.alpha_max)->check(CLI::PositiveNumber);
    c_wn->add_option("--steps", wn.steps)->check(CLI::PositiveNumber);
    c_wn->callback([&] { action = [&](int&) { return run_window(wn); }; });

    std::string witness_kind;
    auto* c_wt = app.add_subcommand("witness", "class and provenance of a witness object");
    c_wt->add_option("--kind", witness_kind, "kind:params[shift]")->required();
    c_wt->callback([&] { action = [&](int&) { return run_witness(witness_kind); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 1;
    }

    try {
        cfg.variety = parse_variety(variety);
        cfg.variety_name = variety;
        cfg.output = output == "csv" ? OutputFormat::Csv : output == "svg" ? OutputFormat::Svg : OutputFormat::Json;
        if (const char* env = std::getenv(kCacheEnv); env && *env) {
            cfg.cache_dir = env;
        } else if (!cache_dir.empty()) {
            cfg.cache_dir = cache_dir;
        }
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 1;
    }
    if (!action) {
        err << "no subcommand\n";
        return 1;
    }

    std::optional<fs::path> cache_file;
    if (cfg.cache_dir && !no_cache) {
        const CLI::App* sub = app.get_subcommands().front();
        const std::string key = canonical_params(*sub) + "\x1d" + config_fingerprint(cfg);
        cache_file = fs::path(*cfg.cache_dir) / (sub->get_name() + "-" + hex64(fnv1a(key)) + ".out");
        std::ifstream in(*cache_file, std::ios::binary);
        if (in) {
            out << in.rdbuf();
            return 0;
        }
    }

    int status = 0;
    std::string text;
    try {
        text = action(status);
    } catch (const ZeroCharge& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const Degenerate& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const NotGeometric& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const DegenerateKernel& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const SingularBasis& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const PathThroughZero& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const NumericFailure& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 1;
    }
    out << text;
    if (cache_file && status == 0) {
        std::error_code ec;
        fs::create_directories(cache_file->parent_path(), ec);
        std::ofstream o(*cache_file, std::ios::binary);
        if (o) o << text;
    }
    return status;
}

}  // namespace bstab::cli
