#include "bstab/charges.hpp"
#include "doctest.h"
#include "support.hpp"

#include <cmath>

using namespace bstab;
using testing::Gen;

namespace {

const Rational R0{0}, R1{1};

/// Z^{a,b}_{alpha,beta} straight from twisted coordinates.
Complex<Rational> full_oracle(const ChernVector& v, const Rational& alpha, const Rational& beta, const Rational& a,
                              const Rational& b) {
    const ChernVector z = testing::series_mul(testing::exp_h(-beta), v);
    return {-z.e3 + b * z.e2 + a * z.e1, z.e2 - alpha * alpha / 2 * z.e0};
}

std::complex<double> eval(const ChargeSpec<double>& s, const ChernVector& v) { return to_std(z_eval(s, v.cast<double>())); }

}  // namespace

TEST_CASE("charge examples") {
    const Complex<Rational> zx = z_eval(tilt_charge(Rational(3), Rational(-2, 7)), classes::skyscraper());
    CHECK(zx.re == -1);
    CHECK(zx.im == 0);
    const Complex<Rational> zo = z_eval(tilt_charge(R1, R0), classes::line_bundle(0));
    CHECK(zo.re == 0);
    CHECK(zo.im == Rational(-1, 6));
    const Complex<Rational> z1 = z_eval(full_charge(R1, R0, R1, R0), classes::line_bundle(1));
    CHECK(z1.re == Rational(5, 6));
    CHECK(z1.im == 0);
}

TEST_CASE("coefficient form matches the twisted formula") {
    Gen g(31);
    for (int i = 0; i < 300; ++i) {
        const ChernVector v = g.cls();
        const Rational alpha = g.positive(), beta = g.rational(), a = g.rational(), b = g.rational();
        const auto spec = full_charge(alpha, beta, a, b);
        CHECK(z_eval(spec, v) == full_oracle(v, alpha, beta, a, b));
        CHECK(z_eval(spec, v) == z_eval_tagged(spec, v));
        const auto tilt = tilt_charge(alpha, beta);
        CHECK(z_eval(tilt, v) == z_eval_tagged(tilt, v));
    }
}

TEST_CASE("phase conventions") {
    CHECK(phase(std::complex<double>(-1, 0)).frac == 1.0);
    CHECK(phase(std::complex<double>(-1, 0)).shift == 0);
    CHECK(phase(std::complex<double>(0, 1)).frac == doctest::Approx(0.5));
    const PhaseValue p = phase(std::complex<double>(5.0 / 6, 0), -1);
    CHECK(p.shift == -1);
    CHECK(p.frac == 1.0);
    CHECK(p.total() == 0.0);
    CHECK_THROWS_AS(phase(std::complex<double>(0, 0)), ZeroCharge);
}

TEST_CASE("complex action") {
    const auto spec = to_double_spec(full_charge(R1, R0, R1, R0));
    const ChernVector v = classes::line_bundle(2);
    const auto minus = complex_act({1.0, 0.0}, spec);
    CHECK(std::abs(eval(minus, v) + eval(spec, v)) < 1e-12);
    const auto shifted = complex_act_phase({1.0, 0.0}, PhaseValue{0, 0.25});
    REQUIRE(shifted);
    CHECK(shifted->total() == doctest::Approx(-0.75));
    const auto doubled = complex_act({0.0, std::log(2.0) / M_PI}, spec);
    CHECK(std::abs(eval(doubled, v) - 2.0 * eval(spec, v)) < 1e-12);
    CHECK(complex_act_phase({0.0, 0.3}, PhaseValue{1, 0.5})->total() == doctest::Approx(1.5));
}

TEST_CASE("group action: identity and inverse") {
    const auto spec = to_double_spec(full_charge(R1, R0, R1, R0));
    const auto same = group_act(GLTilde::identity(), spec);
    CHECK(same.real_coeffs == spec.real_coeffs);
    CHECK(same.imag_coeffs == spec.imag_coeffs);
    const GLTilde g = GLTilde::from_matrix({2.0, 1.0, -0.5, 1.5});
    CHECK(g.lift_inverse(g.lift(0.37)) == doctest::Approx(0.37));
    CHECK(g.lift(1.37) == doctest::Approx(g.lift(0.37) + 1));
    CHECK_THROWS_AS(GLTilde::from_matrix({1.0, 0.0, 0.0, -1.0}), std::invalid_argument);
}

TEST_CASE("normalize recovers Full parameters") {
    const auto spec = to_double_spec(full_charge(R1, R0, R1, R0));
    const Normalization n0 = normalize(spec);
    CHECK(n0.g.matrix[0] == doctest::Approx(1));
    CHECK(n0.g.matrix[1] == doctest::Approx(0).epsilon(1e-12));
    CHECK(n0.g.lift_base == doctest::Approx(0).epsilon(1e-12));
    Gen g(32);
    for (int i = 0; i < 50; ++i) {
        const double alpha = g.real(0.1, 3), beta = g.real(-2, 2), a = g.real(-1, 3), b = g.real(-2, 2);
        const double th = g.real(-3, 3), r = g.real(0.2, 5);
        const GLTilde rot = GLTilde::from_matrix({r * std::cos(th), -r * std::sin(th), r * std::sin(th), r * std::cos(th)});
        const auto moved = group_act(rot, full_charge(alpha, beta, a, b));
        const Normalization n = normalize(moved);
        const auto* tag = std::get_if<FullTag<double>>(&n.normal.tag);
        REQUIRE(tag);
        CHECK(std::abs(tag->alpha - alpha) < 1e-12);
        CHECK(std::abs(tag->beta - beta) < 1e-12);
        CHECK(std::abs(tag->a - a) < 1e-12);
        CHECK(std::abs(tag->b - b) < 1e-12);
    }
}

TEST_CASE("normalize rejects orientation-reversed charges") {
    auto spec = to_double_spec(full_charge(R1, R0, R1, R0));
    for (auto& c : spec.imag_coeffs) c = -c;
    CHECK_THROWS_AS(normalize(spec), NotGeometric);
    ChargeSpec<double> flat;
    CHECK_THROWS_AS(normalize(flat), Degenerate);
}

TEST_CASE("twist equivariance") {
    CHECK(twist_equivariance_check(classes::line_bundle(2), R1, R0, R1, R0, 1));
    CHECK(twist_equivariance_check(classes::skyscraper(), Rational(2), Rational(1, 3), R0, R1, 4));
    Gen g(33);
    for (int i = 0; i < 100; ++i) {
        CHECK(twist_equivariance_check(g.cls(), g.positive(), g.rational(), g.rational(), g.rational(), 2));
    }
}
