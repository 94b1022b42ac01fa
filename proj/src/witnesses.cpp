#include "bstab/witnesses.hpp"

#include "bstab/parallel.hpp"
#include "bstab/quadforms.hpp"
#include "bstab/slopes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>

namespace bstab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeroCharge = 1e-12;

bool steiner_stable(long t, long r) {
    // r < (1 + sqrt 3) t  <=>  r - t < sqrt(3) t
    return r <= t || (r - t) * (r - t) < 3 * t * t;
}

ChernVector steiner_class(long t, long r) {
    return {Rational(r), Rational(t), Rational(-t, 2), Rational(t, 6)};
}

long parse_long(std::string_view s) {
    long out = 0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ParseError("not an integer: '" + std::string(s) + "'");
    return out;
}

std::vector<long> parse_params(std::string_view s) {
    std::vector<long> out;
    while (!s.empty()) {
        const auto comma = s.find(',');
        out.push_back(parse_long(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

/// Angle of z in units of pi, unwrapped to lie within 1 of `near`.
double unwrap(std::complex<double> z, double near) {
    const double theta = std::arg(z) / kPi;
    return theta + 2.0 * std::round((near - theta) / 2.0);
}

/// Continuous phase (units of pi) along t in [t0, t1], subdividing any step
/// whose angle change reaches pi/2.
template <class F>
double track(F&& z_of_t, double t0, double t1, int steps, double phase0) {
    double phase = phase0;
    std::complex<double> prev = z_of_t(t0);
    if (std::abs(prev) <= kZeroCharge) throw PathThroughZero();
    auto advance = [&](auto&& self, double a, double b, std::complex<double> za, int depth) -> std::complex<double> {
        const std::complex<double> zb = z_of_t(b);
        if (std::abs(zb) <= kZeroCharge) throw PathThroughZero();
        const double delta = std::arg(zb / za);
        if (std::abs(delta) < kPi / 2) {
            phase += delta / kPi;
            return zb;
        }
        if (depth > 40) throw PathThroughZero();
        const double m = (a + b) / 2;
        const std::complex<double> zm = self(self, a, m, za, depth + 1);
        return self(self, m, b, zm, depth + 1);
    };
    for (int k = 1; k <= steps; ++k) {
        const double a = t0 + (t1 - t0) * (k - 1) / steps;
        const double b = t0 + (t1 - t0) * k / steps;
        prev = advance(advance, a, b, prev, 0);
    }
    return phase;
}

bool is_line_or_point(const WitnessObject& w) {
    return std::holds_alternative<LineBundleKind>(w.kind) || std::holds_alternative<SkyscraperKind>(w.kind);
}

}  // namespace

std::string WitnessObject::name() const {
    std::string base = std::visit(
        [](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::same_as<K, LineBundleKind>) {
                return "O(" + std::to_string(k.d) + ")";
            } else if constexpr (std::same_as<K, SkyscraperKind>) {
                return "O_x";
            } else if constexpr (std::same_as<K, SteinerKind>) {
                return "steiner(" + std::to_string(k.t) + "," + std::to_string(k.r) + ")";
            } else if constexpr (std::same_as<K, SteinerDualTwistKind>) {
                return "steiner_dual(" + std::to_string(k.t) + "," + std::to_string(k.r) + ")";
            } else {
                return "semihomog(" + std::to_string(k.p) + "/" + std::to_string(k.q) + "," + std::to_string(k.r0) +
                       ")";
            }
        },
        kind);
    return shift == 0 ? base : base + "[" + std::to_string(shift) + "]";
}

WitnessObject make_witness(const WitnessKind& kind, long shift) {
    WitnessObject w;
    w.kind = kind;
    w.shift = shift;
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::same_as<K, LineBundleKind>) {
                w.v = classes::line_bundle(k.d);
                w.stable_hint = "line bundle: stable for every geometric stability condition";
            } else if constexpr (std::same_as<K, SkyscraperKind>) {
                w.v = classes::skyscraper();
                w.stable_hint = "skyscraper: stable of phase 1";
            } else if constexpr (std::same_as<K, SteinerKind> || std::same_as<K, SteinerDualTwistKind>) {
                if (k.t < 1 || k.r < 1) throw BadParams("Steiner parameters need t, r >= 1");
                w.v = steiner_class(k.t, k.r);
                if constexpr (std::same_as<K, SteinerDualTwistKind>) w.v = tensor_line(dual(w.v), 1);
                w.stable = steiner_stable(k.t, k.r);
                w.stable_hint = "Steiner bundle: slope stable iff r < (1+sqrt3) t";
            } else {
                if (k.q < 1 || k.r0 < 1) throw BadParams("semi-homogeneous parameters need q, r0 >= 1");
                const Rational s(k.p, k.q);
                w.v = ChernVector{Rational(1), s, s * s / 2, s * s * s / 6} * Rational(k.r0);
                w.stable_hint = "semi-homogeneous bundle: stable for every geometric stability condition";
            }
        },
        kind);
    return w;
}

WitnessObject parse_witness(std::string_view text) {
    text = trim(text);
    long shift = 0;
    if (!text.empty() && text.back() == ']') {
        const auto open = text.rfind('[');
        if (open == std::string_view::npos) throw ParseError("unbalanced shift in '" + std::string(text) + "'");
        shift = parse_long(text.substr(open + 1, text.size() - open - 2));
        text = text.substr(0, open);
    }
    const auto colon = text.find(':');
    const std::string_view kind = text.substr(0, colon);
    const std::vector<long> p =
        colon == std::string_view::npos ? std::vector<long>{} : parse_params(text.substr(colon + 1));
    auto need = [&](std::size_t n) {
        if (p.size() != n) {
            throw ParseError("'" + std::string(kind) + "' takes " + std::to_string(n) + " parameter(s)");
        }
    };
    if (kind == "line" || kind == "O") {
        need(1);
        return make_witness(LineBundleKind{p[0]}, shift);
    }
    if (kind == "sky" || kind == "skyscraper") {
        need(0);
        return make_witness(SkyscraperKind{}, shift);
    }
    if (kind == "steiner") {
        need(2);
        return make_witness(SteinerKind{p[0], p[1]}, shift);
    }
    if (kind == "steiner_dual") {
        need(2);
        return make_witness(SteinerDualTwistKind{p[0], p[1]}, shift);
    }
    if (kind == "semihomog") {
        need(3);
        return make_witness(SemiHomogKind{p[0], p[1], p[2]}, shift);
    }
    throw ParseError("unknown witness kind '" + std::string(kind) + "'");
}

std::vector<WitnessObject> parse_corpus(std::istream& in) {
    std::vector<WitnessObject> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (!s.empty()) out.push_back(parse_witness(s));
    }
    return out;
}

std::vector<WitnessObject> default_corpus(double beta) {
    const long base = static_cast<long>(std::floor(beta));
    std::vector<WitnessObject> out;
    for (long d = base - 4; d <= base + 5; ++d) out.push_back(make_witness(LineBundleKind{d}));
    out.push_back(make_witness(SkyscraperKind{}));
    return out;
}

HomFact hom_facts(const WitnessObject& a, const WitnessObject& b) {
    if (!is_line_or_point(a) || !is_line_or_point(b)) throw UnsupportedPair();
    HomFact f{a, b, {}};
    const auto* la = std::get_if<LineBundleKind>(&a.kind);
    const auto* lb = std::get_if<LineBundleKind>(&b.kind);
    if (la && lb) {
        if (lb->d >= la->d) f.degrees.push_back(0);
        if (lb->d <= la->d - 4) f.degrees.push_back(3);
    } else if (la) {
        f.degrees = {0};
    } else if (lb) {
        f.degrees = {3};
    } else {
        f.degrees = {0, 1, 2, 3};
    }
    return f;
}

double geometric_phase(const WitnessObject& w, double alpha, double beta, double a, double b) {
    const ChargeSpec<double> spec = full_charge(alpha, beta, a, b);
    BasicChern<double> rep = w.v.cast<double>();
    int k = 0;
    // First tilt: torsion-free sheaves with mu <= beta enter Coh^beta shifted.
    if (rep.e0 > 0 && sign_of(twist(rep, beta).e1) <= 0) {
        rep = -rep;
        k = 1;
    }
    // Second tilt at nu = 0.
    const BasicChern<double> z = twist(rep, beta);
    if (sign_of(z.e1) > 0 && sign_of(z.e2 - alpha * alpha / 2 * z.e0) <= 0) {
        rep = -rep;
        ++k;
    }
    const Complex<double> c = z_eval(spec, rep);
    return phase(to_std(c), 1).total() - k;
}

namespace {

struct GapBest {
    bool found = false;
    double gap = 0.0;
    std::size_t i = 0, j = 0;
    int degree = 0;
    long unsupported = 0;
    bool found_all = false;
    double gap_all = 0.0;
};

GldimResult finish(const std::vector<WitnessObject>& corpus, const std::vector<double>& phases,
                   const std::vector<GapBest>& rows) {
    GldimResult r;
    r.phases = phases;
    GapBest best;
    for (const GapBest& row : rows) {
        best.unsupported += row.unsupported;
        if (row.found_all && (!best.found_all || row.gap_all > best.gap_all)) {
            best.found_all = true;
            best.gap_all = row.gap_all;
        }
        if (row.found && (!best.found || row.gap > best.gap)) {
            best.found = true;
            best.gap = row.gap;
            best.i = row.i;
            best.j = row.j;
            best.degree = row.degree;
        }
    }
    r.unsupported_pairs = best.unsupported;
    r.found = best.found;
    r.max_gap = best.gap_all;
    if (best.found) {
        r.lower_bound = best.gap;
        r.attaining_source = corpus[best.i].name();
        r.attaining_target = corpus[best.j].name();
        r.attaining_degree = best.degree;
    }
    std::set<std::string> hints;
    for (const auto& w : corpus) {
        if (w.stable) hints.insert(w.stable_hint);
    }
    r.hints_used.assign(hints.begin(), hints.end());
    return r;
}

GldimResult scan(const std::vector<WitnessObject>& corpus, const std::vector<double>& phases, unsigned workers) {
    auto row = [&](std::size_t i) {
        GapBest best;
        best.i = i;
        for (std::size_t j = 0; j < corpus.size(); ++j) {
            HomFact f;
            try {
                f = hom_facts(corpus[i], corpus[j]);
            } catch (const UnsupportedPair&) {
                ++best.unsupported;
                continue;
            }
            const bool stable = corpus[i].stable && corpus[j].stable;
            for (int deg : f.degrees) {
                const double gap = phases[j] + deg - phases[i];
                if (!best.found_all || gap > best.gap_all) {
                    best.found_all = true;
                    best.gap_all = gap;
                }
                if (stable && (!best.found || gap > best.gap)) {
                    best.found = true;
                    best.gap = gap;
                    best.j = j;
                    best.degree = deg;
                }
            }
        }
        return best;
    };
    return finish(corpus, phases, parallel_map<GapBest>(corpus.size(), workers, row));
}

}  // namespace

GldimResult gldim_scan(double alpha, double beta, double a, double b, const std::vector<WitnessObject>& corpus,
                       unsigned workers) {
    if (corpus.empty()) throw EmptyCorpus();
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    std::vector<double> phases;
    phases.reserve(corpus.size());
    for (const auto& w : corpus) phases.push_back(geometric_phase(w, alpha, beta, a, b));
    return scan(corpus, phases, workers);
}

GldimResult gldim_scan_algebraic(const ExcCollection& coll, const AlgebraicDatum& datum) {
    std::vector<WitnessObject> corpus;
    std::vector<double> phases;
    for (int j = 0; j < 4; ++j) {
        const ChernVector& v = coll.classes[j];
        if (v.e0 != 1 || floor_of(v.e1) != v.e1) throw UnsupportedPair();
        const long d = v.e1.convert_to<long>();
        if (classes::line_bundle(d) != v) throw UnsupportedPair();
        corpus.push_back(make_witness(LineBundleKind{d}));
        phases.push_back(datum.phi[j]);
    }
    GldimResult r = scan(corpus, phases, 1);
    r.hints_used = {"exceptional collection members: stable of phase phi_j"};
    return r;
}

MonotonicityResult phase_monotonicity(const ChernVector& v, double alpha, double beta, double a, double b, double c,
                                      double t_max, int steps) {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    if (c < 0) throw std::invalid_argument("c must be non-negative");
    if (t_max < 0 || steps < 1) throw std::invalid_argument("need t_max >= 0 and steps >= 1");
    const BasicChern<double> vd = v.cast<double>();
    auto z_at = [&](double t) { return to_std(z_eval(full_charge(alpha, beta - t * c, a, b), vd)); };
    auto deriv = [&](double t) {
        const std::complex<double> z = z_at(t);
        const double n2 = std::norm(z);
        if (std::sqrt(n2) <= kZeroCharge) throw PathThroughZero();
        return im_zprime_zbar<double>(vd, alpha, beta - t * c, a, b, c).value / n2;
    };
    MonotonicityResult r;
    const std::complex<double> z0 = z_at(0.0);
    if (std::abs(z0) <= kZeroCharge) throw PathThroughZero();
    r.phase_start = phase(z0, 1).total();
    r.phase_end = t_max > 0 ? track(z_at, 0.0, t_max, steps, r.phase_start) : r.phase_start;
    r.min_derivative = deriv(0.0);
    for (int k = 1; k <= steps && t_max > 0; ++k) r.min_derivative = std::min(r.min_derivative, deriv(t_max * k / steps));

    r.im_formula_at_zero = deriv(0.0);
    const double h = 1e-6;
    r.derivative_at_zero = std::arg(z_at(h) / z0) / h;
    const double f = r.im_formula_at_zero, d = r.derivative_at_zero;
    const double scale = 1e-4 * (1 + std::abs(f));
    if (std::abs(f) <= scale) {
        r.matches_im_formula = std::abs(d) <= 10 * scale;
    } else {
        r.matches_im_formula = (f > 0) == (d > 0);
    }
    return r;
}

WindowResult large_volume_window(const ChernVector& v, double beta, double alpha_max, int steps) {
    if (v.is_zero()) throw std::invalid_argument("class must be nonzero");
    if (!(alpha_max > 0) || steps < 1) throw std::invalid_argument("need alpha_max > 0 and steps >= 1");
    const BasicChern<double> vd = v.cast<double>();
    auto z_at = [&](double t) { return to_std(z_eval(tilt_charge(t, beta), vd)); };
    const double t0 = std::min(1e-3, alpha_max / steps);
    const std::complex<double> z0 = z_at(t0);
    if (std::abs(z0) <= kZeroCharge) throw PathThroughZero();

    WindowResult r;
    r.initial_shift = (z0.imag() > 0 || (z0.imag() == 0 && z0.real() < 0)) ? 0 : 1;
    const std::complex<double> rep = r.initial_shift == 0 ? z0 : -z0;
    r.initial_phase = phase(rep, 1).total() - static_cast<double>(r.initial_shift);
    r.final_phase = track(z_at, t0, alpha_max, steps, r.initial_phase);

    // Asymptotic direction of Z_t as t -> infinity.
    const BasicChern<double> z = twist(vd, beta);
    std::complex<double> dir;
    if (sign_of(z.e0) != 0) {
        dir = {0.0, -z.e0};
    } else if (sign_of(z.e1) != 0) {
        dir = {z.e1, 0.0};
    } else if (sign_of(z.e2) != 0) {
        dir = {0.0, z.e2};
    } else {
        dir = {-z.e3, 0.0};
    }
    r.limit_phase = unwrap(dir, r.final_phase);
    r.window_hi = std::ceil(r.limit_phase) + 0.0;
    r.window_lo = r.window_hi - 1;
    return r;
}

}  // namespace bstab
