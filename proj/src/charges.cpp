#include "bstab/charges.hpp"

#include <cmath>
#include <numbers>

namespace bstab {

namespace {

using Mat2 = std::array<double, 4>;

Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

Mat2 inverse(const Mat2& m) {
    const double det = m[0] * m[3] - m[1] * m[2];
    return {m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};
}

std::array<double, 2> apply(const Mat2& m, double x, double y) {
    return {m[0] * x + m[1] * y, m[2] * x + m[3] * y};
}

/// Applies a real-linear map of C = R^2 to every coefficient pair.
ChargeSpec<double> transform(const Mat2& m, const ChargeSpec<double>& spec) {
    ChargeSpec<double> out;
    for (int k = 0; k < 4; ++k) {
        auto [re, im] = apply(m, spec.real_coeffs[k], spec.imag_coeffs[k]);
        out.real_coeffs[k] = re;
        out.imag_coeffs[k] = im;
    }
    return out;
}

constexpr double kPi = std::numbers::pi;

}  // namespace

PhaseValue PhaseValue::from_total(double phi) {
    PhaseValue p;
    p.shift = static_cast<long>(std::ceil(phi)) - 1;
    p.frac = phi - static_cast<double>(p.shift);
    return p;
}

PhaseValue phase(std::complex<double> z, long shift) {
    if (z == 0.0) throw ZeroCharge();
    const double theta = std::atan2(z.imag(), z.real()) / kPi;  // (-1, 1]
    const double m = std::floor((static_cast<double>(shift) - 1.0 - theta) / 2.0) + 1.0;
    return PhaseValue::from_total(theta + 2.0 * m);
}

double GLTilde::lift(double phi) const {
    const double n = std::floor(phi);
    const double r = phi - n;
    auto [x0, y0] = apply(matrix, 1.0, 0.0);
    auto [x1, y1] = apply(matrix, std::cos(kPi * r), std::sin(kPi * r));
    double delta = std::atan2(y1, x1) - std::atan2(y0, x0);
    while (delta < 0) delta += 2 * kPi;
    while (delta >= 2 * kPi) delta -= 2 * kPi;
    return lift_base + n + delta / kPi;
}

double GLTilde::lift_inverse(double psi) const {
    const double n = std::floor(psi - lift_base);
    const double s = psi - lift_base - n;
    auto [x0, y0] = apply(matrix, 1.0, 0.0);
    const double c = std::cos(kPi * s), sn = std::sin(kPi * s);
    const double wx = c * x0 - sn * y0;
    const double wy = sn * x0 + c * y0;
    auto [ux, uy] = apply(inverse(matrix), wx, wy);
    double r = std::atan2(uy, ux) / kPi;
    if (r < 0) r += 1.0;
    if (r >= 1.0) r -= 1.0;
    return n + r;
}

GLTilde GLTilde::compose(const GLTilde& other) const {
    GLTilde g;
    g.matrix = mul(matrix, other.matrix);
    g.lift_base = lift(other.lift_base);
    return g;
}

GLTilde GLTilde::from_matrix(const std::array<double, 4>& m) {
    GLTilde g;
    g.matrix = m;
    if (g.det() <= 0) throw std::invalid_argument("GL+(2,R) element needs positive determinant");
    auto [x0, y0] = apply(m, 1.0, 0.0);
    g.lift_base = std::atan2(y0, x0) / kPi;
    return g;
}

ChargeSpec<double> group_act(const GLTilde& g, const ChargeSpec<double>& spec) {
    return transform(inverse(g.matrix), spec);
}

std::optional<PhaseValue> group_act_phase(const GLTilde& g, std::optional<PhaseValue> phi) {
    if (!phi) return std::nullopt;
    return PhaseValue::from_total(g.lift_inverse(phi->total()));
}

ChargeSpec<double> complex_act(std::complex<double> lambda, const ChargeSpec<double>& spec) {
    const std::complex<double> w = std::exp(std::complex<double>(kPi * lambda.imag(), -kPi * lambda.real()));
    return transform({w.real(), -w.imag(), w.imag(), w.real()}, spec);
}

std::optional<PhaseValue> complex_act_phase(std::complex<double> lambda, std::optional<PhaseValue> phi) {
    if (!phi) return std::nullopt;
    return PhaseValue::from_total(phi->total() - lambda.real());
}

Normalization normalize(const ChargeSpec<double>& spec, double tol) {
    const std::complex<double> zx(spec.real_coeffs[0], spec.imag_coeffs[0]);
    if (std::abs(zx) <= tol) throw Degenerate();

    // Rotate and rescale so that Z(O_x) = -1.
    const std::complex<double> w = -1.0 / zx;
    const Mat2 rotate{w.real(), -w.imag(), w.imag(), w.real()};
    ChargeSpec<double> s = transform(rotate, spec);

    const double b2 = s.imag_coeffs[1];
    if (b2 <= tol) throw NotGeometric();
    const Mat2 scale{1.0, 0.0, 0.0, 1.0 / b2};
    s = transform(scale, s);

    const double beta = -s.imag_coeffs[2];
    const double a2 = s.real_coeffs[1], a3 = s.real_coeffs[2], a4 = s.real_coeffs[3];
    const double b4 = s.imag_coeffs[3];
    const double d = beta * beta / 2 - b4;
    const double b = a2 - beta;
    const double a = a3 + a2 * beta - beta * beta / 2;
    const double c = a4 + a3 * beta + a2 * beta * beta / 2 - beta * beta * beta / 6;

    Mat2 total = mul(scale, rotate);
    Normalization out;
    if (d > tol) {
        const double shear_s = c / d;
        const Mat2 shear{1.0, shear_s, 0.0, 1.0};
        total = mul(shear, total);
        out.normal = full_charge(std::sqrt(2 * d), beta, a, b + shear_s);
    } else {
        out.normal = general_charge(a, b, c, d, beta);
    }
    // normal = T^{-1} spec with T^{-1} = total; O_x moves from its old phase to 1.
    out.g.matrix = inverse(total);
    out.g.lift_base = phase(zx, 0).total() - 1.0;
    return out;
}

}  // namespace bstab
