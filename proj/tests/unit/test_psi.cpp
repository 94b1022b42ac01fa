#include "bstab/psi.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bstab;

namespace {

const Rational R0{0}, R1{1};

PsiOptions opts(long box, double window = 1e-3) {
    PsiOptions o;
    o.box_bound = box;
    o.nu_window = window;
    return o;
}

/// Brute force over a wide integer box with every constraint checked directly.
std::optional<Rational> upper_oracle(const Rational& alpha, const Rational& beta, const Rational& b, long n,
                                     const Rational& window) {
    std::optional<Rational> best;
    const Rational a2 = alpha * alpha;
    for (long n0 = -n; n0 <= n; ++n0) {
        for (long n1 = -4 * n; n1 <= 4 * n; ++n1) {
            for (long n2 = -8 * n; n2 <= 8 * n; ++n2) {
                const ChernVector base{Rational(n0), Rational(n1), Rational(n2, 2), R0};
                const ChernVector z = testing::series_mul(testing::exp_h(-beta), base);
                if (z.e1 <= 0 || z.e1 > n || abs_of(z.e2) > n) continue;
                const Rational nu = (z.e2 - a2 / 2 * z.e0) / (alpha * z.e1);
                if (abs_of(nu) >= window) continue;
                const Rational db = base.e1 * base.e1 - 2 * base.e0 * base.e2;
                if (db < 0) continue;
                for (long n3 = -60; n3 <= 60; ++n3) {
                    ChernVector v = base;
                    v.e3 = Rational(n3, 6);
                    const ChernVector t = testing::series_mul(testing::exp_h(-beta), v);
                    if (a2 * db + 4 * t.e2 * t.e2 - 6 * t.e1 * t.e3 < 0) continue;
                    const Rational obj = (t.e3 - b * t.e2) / t.e1;
                    if (!best || obj > *best) best = obj;
                }
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("xi bound examples") {
    const auto x = xi_bound(R1, R0, R0);
    CHECK(x.mid == Rational(1, 6));
    CHECK(x.xi == Rational(7, 24));
    CHECK(xi_bound(Rational(2), R1, R0).mid == Rational(5, 3));
}

TEST_CASE("psi at (1,0,0) and (1,0,2)") {
    const auto e = psi_estimate(R1, R0, R0, opts(8));
    CHECK(e.closed_form == Rational(1, 6));
    REQUIRE(e.lower);
    CHECK(*e.lower == Rational(1, 6));
    CHECK(*e.lower_witness == classes::line_bundle(1));
    REQUIRE(e.upper);
    CHECK(*e.upper >= *e.lower);
    CHECK(to_double(*e.upper) <= e.mid_bound + 1e-9);

    const auto f = psi_estimate(R1, R0, Rational(2), opts(8));
    REQUIRE(f.lower);
    CHECK(*f.lower == Rational(7, 6));
    CHECK(*f.lower_witness == parse_class("-1,1,-1/2,1/6"));
    CHECK(f.lower_label == "O(-1)[1]");
}

TEST_CASE("psi lower equals the closed form at integer points") {
    for (const long alpha : {1L, 2L}) {
        for (const long beta : {-1L, 0L, 2L}) {
            for (const Rational b : {Rational(-2), Rational(-1), R0, Rational(1, 2), R1, Rational(2)}) {
                const auto e = psi_estimate(Rational(alpha), Rational(beta), b, opts(6));
                REQUIRE(e.lower);
                CHECK(*e.lower == e.closed_form);
                REQUIRE(e.upper);
                CHECK(*e.upper >= *e.lower);
                CHECK(to_double(*e.upper) <= e.mid_bound + 1e-9);
            }
        }
    }
}

TEST_CASE("psi upper matches a brute-force oracle") {
    for (const Rational b : {Rational(-1), R0, Rational(1, 2)}) {
        const auto e = psi_estimate(R1, R0, b, opts(2, 1e-3));
        const auto o = upper_oracle(R1, R0, b, 2, Rational(1e-3));
        REQUIRE(o);
        REQUIRE(e.upper);
        CHECK(*e.upper == *o);
    }
}

TEST_CASE("psi sandwich at non-integer points") {
    testing::Gen g(51);
    for (int i = 0; i < 6; ++i) {
        const Rational alpha = g.positive(6, 4), beta = g.rational(8, 3), b = g.rational(6, 4);
        const auto e = psi_estimate(alpha, beta, b, opts(5, 0.05));
        if (e.lower && e.upper) CHECK(*e.lower <= *e.upper);
        if (e.upper) CHECK(to_double(*e.upper) <= e.mid_bound + 1e-9);
    }
}

TEST_CASE("psi results do not depend on the worker count") {
    PsiOptions one = opts(6), many = opts(6);
    many.workers = 4;
    const auto a = psi_estimate(Rational(3, 2), Rational(1, 3), Rational(1, 2), one);
    const auto b = psi_estimate(Rational(3, 2), Rational(1, 3), Rational(1, 2), many);
    CHECK(a.upper == b.upper);
    CHECK(a.upper_witness == b.upper_witness);
}

TEST_CASE("region membership") {
    auto flags = [](const Rational& a, const Rational& b) {
        return region_membership(R1, a, b, psi_estimate(R1, R0, b, opts(4)));
    };
    const RegionFlags in = flags(R1, R0);
    CHECK(in.in_B == Tri::True);
    CHECK(in.in_B_Psi == Tri::True);
    CHECK(in.in_B_star_Psi == Tri::True);
    const RegionFlags out = flags(Rational(1, 10), R0);
    CHECK(out.in_B == Tri::False);
    CHECK(out.in_B_Psi == Tri::False);
    CHECK(out.in_B_star_Psi == Tri::False);
    const RegionFlags mid = flags(Rational(1, 5), R1);
    CHECK(mid.in_B == Tri::False);
    CHECK(mid.in_B_star_Psi == Tri::False);
}

TEST_CASE("boundary witnesses") {
    const auto w = boundary_witness_search(R1, R0, Rational(1, 6), R0, 8);
    CHECK(std::find(w.begin(), w.end(), classes::line_bundle(1)) != w.end());
    for (const auto& v : w) {
        const auto z = z_eval(full_charge(R1, R0, Rational(1, 6), R0), v);
        CHECK(z.re == 0);
        CHECK(z.im == 0);
        CHECK(is_lattice_point(v));
    }
    CHECK(boundary_witness_search(R1, R0, R1, R0, 8).empty());
}
