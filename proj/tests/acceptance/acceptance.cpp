// Runs every acceptance criterion and prints one PASS/FAIL line each.

#include "bstab/charges.hpp"
#include "bstab/exceptional.hpp"
#include "bstab/psi.hpp"
#include "bstab/quadforms.hpp"
#include "bstab/walls.hpp"
#include "bstab/witnesses.hpp"

#include "../unit/support.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

using namespace bstab;
using testing::Gen;

namespace {

const Rational R0{0}, R1{1};

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
    void expect(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
};

ChernVector twisted(const ChernVector& v, const Rational& beta) {
    return testing::series_mul(testing::exp_h(-beta), v);
}

/// A point of the region: alpha > 0, a > alpha^2/6 + alpha |b| / 2.
struct RegionPoint {
    double alpha, beta, a, b;
};

RegionPoint region_point(Gen& g) {
    RegionPoint p;
    p.alpha = g.real(0.1, 3);
    p.beta = g.real(-3, 3);
    p.b = g.real(-2, 2);
    p.a = p.alpha * p.alpha / 6 + p.alpha * std::abs(p.b) / 2 + g.real(1e-3, 3);
    return p;
}

std::string str(const Rational& r) { return format_rational(r); }

// 1
Outcome twist_invariance() {
    Outcome o;
    Gen g(1001);
    for (int i = 0; i < 1000; ++i) {
        const ChernVector v = g.cls();
        const Rational beta = g.rational();
        const ChernVector z = twist(v, beta);
        const Rational from_twisted = z.e1 * z.e1 - 2 * z.e0 * z.e2;
        o.expect(from_twisted == delta_bar(v), "mismatch at " + format_class(v) + ", beta " + str(beta));
        o.expect(z == twisted(v, beta), "twist differs from the series product at " + format_class(v));
    }
    return o;
}

// 2
Outcome line_bundle_saturation() {
    Outcome o;
    for (long d = -5; d <= 5; ++d) {
        const ChernVector v = classes::line_bundle(d);
        for (const Rational K : {Rational(-2), R0, Rational(7, 2), Rational(10)}) {
            for (long k = -24; k <= 24; ++k) {
                const Rational beta(k, 4);
                o.expect(q_form(v, K, beta) == 0, "Q_K(O(" + std::to_string(d) + ")) != 0 at beta " + str(beta));
            }
        }
        for (const Rational alpha : {Rational(1, 3), Rational(1, 2), R1, Rational(2)}) {
            for (int side = 0; side < 2; ++side) {
                // beta below d uses O(d); beta above d uses O(d)[1], which has ch1^beta > 0.
                const Rational beta = side == 0 ? Rational(d) - alpha : Rational(d) + alpha;
                const ChernVector u = side == 0 ? v : -v;
                const ChernVector z = twisted(u, beta);
                const std::string at = "O(" + std::to_string(d) + ") alpha " + str(alpha) + " beta " + str(beta);
                o.expect(z.e3 == alpha * alpha / 6 * z.e1, "generalized BG not an equality, " + at);
                o.expect(z.e3 < alpha * alpha / 2 * z.e1, "strict inequality fails, " + at);
                const BgReport r = bg_report(u, alpha, beta);
                o.expect(r.generalized && *r.generalized, "bg_report generalized, " + at);
                o.expect(r.bmt_strict && *r.bmt_strict, "bg_report strict, " + at);
            }
        }
    }
    return o;
}

// 3
Outcome psi_integer_points() {
    Outcome o;
    PsiOptions opt;
    opt.box_bound = 8;
    opt.workers = 4;
    for (const long alpha : {1L, 2L}) {
        for (const long beta : {-1L, 0L, 1L}) {
            for (const Rational b : {Rational(-2), Rational(-1), R0, Rational(1, 2), R1, Rational(2)}) {
                const std::string at =
                    "(" + std::to_string(alpha) + "," + std::to_string(beta) + "," + str(b) + ")";
                const auto e = psi_estimate(Rational(alpha), Rational(beta), b, opt);
                const Rational closed = Rational(alpha * alpha, 6) + Rational(alpha) * abs_of(b) / 2;
                if (!e.lower || !e.upper) {
                    o.fail("missing bound at " + at);
                    continue;
                }
                o.expect(*e.lower == closed, "lower " + str(*e.lower) + " != " + str(closed) + " at " + at);
                const ChernVector up = classes::line_bundle(beta + alpha);
                const ChernVector down = -classes::line_bundle(beta - alpha);
                o.expect(*e.lower_witness == up || *e.lower_witness == down,
                         "witness " + format_class(*e.lower_witness) + " at " + at);
                o.expect(*e.upper >= *e.lower, "upper below lower at " + at);
                o.expect(to_double(*e.upper) <= e.mid_bound + 1e-9, "upper above the mid bound at " + at);
            }
        }
    }
    return o;
}

// 4
Outcome support_interval_center() {
    Outcome o;
    Gen g(1004);
    for (int i = 0; i < 200; ++i) {
        const RegionPoint p = region_point(g);
        const double k = (p.alpha * p.alpha + 6 * p.a) / 2;
        std::ostringstream at;
        at << "(" << p.alpha << "," << p.beta << "," << p.a << "," << p.b << ")";
        o.expect(support_interval(p.alpha, p.beta, p.a, p.b).contains(k), "center not contained at " + at.str());
    }
    return o;
}

// 5
Outcome s_delta_kernel() {
    Outcome o;
    Gen g(1005);
    for (int i = 0; i < 50; ++i) {
        const Rational alpha = g.positive(), beta = g.rational(), a = g.rational(), b = g.rational();
        const Rational delta = g.positive();
        const auto spec = full_charge(alpha, beta, a, b);
        FormParams<Rational> p;
        p.delta = delta;
        p.alpha = alpha;
        p.a = a;
        p.b = b;
        const QuadForm<Rational> q = make_form(FormKind::SDelta, beta, p);
        const KernelRestriction<Rational> r = kernel_restrict(q, spec);
        // Both basis vectors and the cross term.
        std::array<ChernVector, 2> e;
        for (int k = 0; k < 2; ++k) e[k] = {r.basis[k][0], r.basis[k][1], r.basis[k][2], r.basis[k][3]};
        for (int k = 0; k < 2; ++k) {
            const Complex<Rational> z = z_eval(spec, e[k]);
            o.expect(z.re == 0 && z.im == 0, "basis vector outside the kernel");
        }
        const Rational x0 = twisted(e[0], beta).e1, x1 = twisted(e[1], beta).e1;
        o.expect(r.gram2[0][0] == -delta * x0 * x0, "S_delta(e0) != -delta (e1^beta)^2");
        o.expect(r.gram2[1][1] == -delta * x1 * x1, "S_delta(e1) != -delta (e1^beta)^2");
        o.expect(r.gram2[0][1] == -delta * x0 * x1, "cross term differs");
    }
    return o;
}

// 6
Outcome zieq() {
    Outcome o;
    Gen g(1006);
    for (int i = 0; i < 1000; ++i) {
        const ChernVector v = g.cls();
        const Rational alpha = g.positive(), beta = g.rational(), a = g.rational(), b = g.rational();
        const Rational c = abs_of(g.rational());
        const auto r = im_zprime_zbar(v, alpha, beta, a, b, c);
        // Independent evaluation: Z_t is linear in the twisted class, dZ/dt = c Z(shifted zeta).
        const ChernVector z = twisted(v, beta);
        const Rational a2 = alpha * alpha;
        const Rational re = -z.e3 + b * z.e2 + a * z.e1, im = z.e2 - a2 / 2 * z.e0;
        const Rational dre = c * (-z.e2 + b * z.e1 + a * z.e0), dim = c * z.e1;
        const Rational direct = dim * re - dre * im;
        o.expect(r.value == direct, "Im(Z' conj Z) differs from the direct evaluation");
        o.expect(r.expansion == direct && r.expansion_ok, "zeta expansion differs");
    }
    long checked = 0;
    for (int i = 0; i < 20; ++i) {
        const RegionPoint p = region_point(g);
        const double k = (p.alpha * p.alpha + 6 * p.a) / 2;
        for (const double c : {0.0, 1.0}) {
            for (long n0 = -6; n0 <= 6; ++n0) {
                for (long n1 = -6; n1 <= 6; ++n1) {
                    for (long n2 = -6; n2 <= 6; ++n2) {
                        for (long n3 = -6; n3 <= 6; ++n3) {
                            const BasicChern<double> v{double(n0), double(n1), n2 / 2.0, n3 / 6.0};
                            if (q_form(v, k, p.beta) < 0) continue;
                            ++checked;
                            const double val = im_zprime_zbar(v, p.alpha, p.beta, p.a, p.b, c).value;
                            if (val < -1e-9) {
                                std::ostringstream s;
                                s << "Im(Z' conj Z) = " << val << " for (" << n0 << "," << n1 << "," << n2 << ","
                                  << n3 << ")";
                                o.fail(s.str());
                            }
                        }
                    }
                }
            }
        }
    }
    o.expect(checked > 0, "no lattice class satisfied Q >= 0");
    return o;
}

// 7
Outcome euler_serre() {
    Outcome o;
    for (long d = -6; d <= 6; ++d) {
        o.expect(euler(classes::line_bundle(0), classes::line_bundle(d)) == testing::binom3(d),
                 "chi(O, O(" + std::to_string(d) + ")) differs from the binomial");
    }
    o.expect(testing::binom3(-4) == -1 && testing::binom3(-2) == 0, "binomial convention");
    Gen g(1007);
    for (int i = 0; i < 500; ++i) {
        const ChernVector v = g.lattice(8), w = g.lattice(8);
        o.expect(euler(v, w) == -euler(w, tensor_line(v, -4)),
                 "Serre duality fails for " + format_class(v) + ", " + format_class(w));
    }
    return o;
}

// 8
Outcome gldim_three() {
    Outcome o;
    Gen g(1008);
    for (int i = 0; i < 20; ++i) {
        const RegionPoint p = region_point(g);
        const GldimResult r = gldim_scan(p.alpha, p.beta, p.a, p.b, default_corpus(p.beta), 4);
        std::ostringstream at;
        at << "(" << p.alpha << "," << p.beta << "," << p.a << "," << p.b << ")";
        o.expect(r.found && r.lower_bound == 3.0, "lower bound " + std::to_string(r.lower_bound) + " at " + at.str());
        o.expect(r.attaining_source == "O_x" && r.attaining_target == "O_x" && r.attaining_degree == 3,
                 "attained by " + r.attaining_source + " -> " + r.attaining_target + " at " + at.str());
        o.expect(r.max_gap <= 3 + 1e-9, "gap " + std::to_string(r.max_gap) + " exceeds 3 at " + at.str());
    }
    AlgebraicDatum d;
    d.phi = {0, 1.5, 3.6, 6.1};
    const GldimResult alg = gldim_scan_algebraic(beilinson(0), d);
    o.expect(std::abs(alg.lower_bound - 6.1) <= 1e-9, "algebraic gldim " + std::to_string(alg.lower_bound));
    return o;
}

// 9
Outcome boundary_witness() {
    Outcome o;
    const auto w = boundary_witness_search(R1, R0, Rational(1, 6), R0, 8);
    o.expect(std::find(w.begin(), w.end(), classes::line_bundle(1)) != w.end(), "O(1) missing at (1,0,1/6,0)");
    const auto e = boundary_witness_search(R1, R0, R1, R0, 8);
    o.expect(e.empty(), std::to_string(e.size()) + " classes at (1,0,1,0)");
    return o;
}

// Brute-force destabilizer oracle over the (e0, e1, 2 e2) cube.
std::set<std::array<long, 3>> destab_oracle(const ChernVector& v, const Rational& alpha, const Rational& beta,
                                             long n) {
    auto admissible = [&](const ChernVector& z) {
        if (z.e1 != 0) return z.e1 > 0;
        return z.e2 - alpha * alpha / 6 * z.e0 >= 0;
    };
    std::set<std::array<long, 3>> out;
    ChernVector v0 = v;
    v0.e3 = 0;
    const ChernVector zv = twisted(v0, beta);
    const Rational a2 = alpha * alpha;
    const Rational nv = (zv.e2 - a2 / 2 * zv.e0) / (alpha * zv.e1);
    for (long a = -n; a <= n; ++a) {
        for (long b = -n; b <= n; ++b) {
            for (long c = -n; c <= n; ++c) {
                const ChernVector w{Rational(a), Rational(b), Rational(c, 2), R0};
                const ChernVector zw = twisted(w, beta);
                if (!(zw.e1 > 0 && zw.e1 <= zv.e1)) continue;
                if (!((zw.e2 - a2 / 2 * zw.e0) / (alpha * zw.e1) > nv)) continue;
                const ChernVector q = v0 - w;
                if (w.e1 * w.e1 - 2 * w.e0 * w.e2 < 0 || q.e1 * q.e1 - 2 * q.e0 * q.e2 < 0) continue;
                if (!admissible(zw) || !admissible(zv - zw)) continue;
                out.insert({a, b, c});
            }
        }
    }
    return out;
}

// 10
Outcome wall_conic_check() {
    Outcome o;
    const ChernVector ix = classes::ideal_point(), o1 = classes::line_bundle(-1);
    auto c = wall_conic(ix, o1);
    // Oracle polynomial -(alpha^2 + beta^2 + beta): compare up to a nonzero scalar.
    WallPoly<Rational> oracle{};
    oracle[0][1] = -1;
    oracle[2][0] = -1;
    oracle[1][0] = -1;
    const Rational scale = c.coeff[0][1] / oracle[0][1];
    o.expect(scale != 0, "wall has no alpha^2 term");
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 2; ++j) o.expect(c.coeff[i][j] == scale * oracle[i][j], "coefficient mismatch");
    }
    const auto circ = circle_form(c);
    o.expect(circ && circ->center == Rational(-1, 2) && circ->radius2 == Rational(1, 4), "circle mismatch");
    sample_wall(c, -1.0, 0.0, 200);
    o.expect(c.samples.size() > 100, "too few samples");
    for (const auto& [b, a] : c.samples) {
        const double nv = *nu(ix.cast<double>(), a, b).value, nw = *nu(o1.cast<double>(), a, b).value;
        if (std::abs(nv - nw) > 1e-9) o.fail("nu differs by " + std::to_string(std::abs(nv - nw)));
    }
    Gen g(1010);
    const std::vector<ChernVector> targets = {ix, parse_class("2,1,-1/2,1/3"), parse_class("1,0,-1,0"),
                                              parse_class("3,1,-3/2,0"), parse_class("2,-1,-1/2,1/6")};
    int compared = 0, nonempty = 0;
    for (const auto& v : targets) {
        for (int i = 0; i < 6; ++i) {
            const Rational alpha = g.positive(6, 8);
            const Rational beta = Rational(g.integer(-16, 4), 8);
            if (trichotomy(v, alpha, beta) != Trichotomy::PositiveCh1) continue;
            const long n = g.integer(2, 6);
            std::set<std::array<long, 3>> got;
            for (const auto& w : destabilizer_search(v, alpha, beta, n, 4)) {
                const LatticePoint p = to_lattice(w);
                got.insert({p.n0, p.n1, p.n2});
            }
            ++compared;
            if (!got.empty()) ++nonempty;
            o.expect(got == destab_oracle(v, alpha, beta, n),
                     "destabilizers differ for " + format_class(v) + " at alpha " + str(alpha) + " beta " + str(beta));
        }
    }
    o.expect(compared >= 10 && nonempty >= 3, "too few nontrivial destabilizer comparisons");
    return o;
}

// 11
Outcome exceptional_regions() {
    Outcome o;
    const ExcCollection b = beilinson(0);
    o.expect(check_exceptional(b), "Beilinson(0) not exceptional");
    // Independent check with the binomial oracle: chi(O(j), O(i)) = binom(i - j + 3, 3).
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) o.expect(testing::binom3(i - j) == 0, "oracle: backward chi nonzero");
    }
    AlgebraicDatum in;
    in.phi = {0, 1.5, 3.6, 6.1};
    const ThetaMembership t = theta_membership(in);
    o.expect(t.in_theta && t.in_theta_star, "(0,1.5,3.6,6.1) not in Theta / Theta*");
    AlgebraicDatum out;
    out.phi = {0, 1, 2, 3};
    o.expect(!theta_membership(out).in_theta, "(0,1,2,3) in Theta");
    for (const auto& d : {in, out}) {
        const double res = algebraic_residual(b, d, algebraic_charge(b, d));
        o.expect(res <= 1e-10, "residual " + std::to_string(res));
    }
    return o;
}

// 12
Outcome normalization_round_trip() {
    Outcome o;
    Gen g(1012);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const double alpha = g.real(0.2, 3), beta = g.real(-2, 2), a = g.real(-1, 3), b = g.real(-2, 2);
        std::array<double, 4> m;
        do {
            for (double& x : m) x = g.real(-2, 2);
        } while (m[0] * m[3] - m[1] * m[2] < 0.25);
        const GLTilde act = GLTilde::from_matrix(m);
        const Normalization n = normalize(group_act(act, full_charge(alpha, beta, a, b)));
        const auto* tag = std::get_if<FullTag<double>>(&n.normal.tag);
        if (!tag) {
            o.fail("normal form is not Full");
            continue;
        }
        worst = std::max({worst, std::abs(tag->alpha - alpha), std::abs(tag->beta - beta), std::abs(tag->a - a),
                          std::abs(tag->b - b)});
    }
    o.expect(worst <= 1e-12, "worst parameter error " + std::to_string(worst));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"twist invariance of Delta", twist_invariance},
        {"line-bundle saturation", line_bundle_saturation},
        {"Psi at integer points", psi_integer_points},
        {"support interval contains (alpha^2+6a)/2", support_interval_center},
        {"S_delta kernel identity", s_delta_kernel},
        {"Im(Z' conj Z) expansion and sign", zieq},
        {"Euler pairing and Serre duality", euler_serre},
        {"gldim = 3 on the region, 6.1 at the algebraic datum", gldim_three},
        {"boundary witness", boundary_witness},
        {"wall conic and destabilizer oracle", wall_conic_check},
        {"exceptional regions", exceptional_regions},
        {"normalization round trip", normalization_round_trip},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (out.ok ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first;
        std::cout << " (" << std::fixed << std::setprecision(2) << secs << "s)";
        if (!out.ok) std::cout << ": " << out.detail;
        std::cout << "\n";
        if (!out.ok) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
