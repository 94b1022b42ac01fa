#include "bstab/exceptional.hpp"

#include "bstab/linalg.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace bstab {

ExcCollection beilinson(long k) {
    ExcCollection c;
    for (int i = 0; i < 4; ++i) {
        c.classes[i] = classes::line_bundle(k + i);
        c.names[i] = "O(" + std::to_string(k + i) + ")";
    }
    return c;
}

ExcCollection mutate(const ExcCollection& coll, int i, Mutation kind) {
    if (i < 1 || i > 3) throw BadIndex();
    ExcCollection out = coll;
    const ChernVector& e = coll.classes[i - 1];
    const ChernVector& f = coll.classes[i];
    const Rational chi = euler(e, f);
    if (kind == Mutation::Left) {
        out.classes[i - 1] = e * chi - f;
        out.classes[i] = e;
        out.names[i - 1] = "L_" + coll.names[i - 1] + "(" + coll.names[i] + ")";
        out.names[i] = coll.names[i - 1];
    } else {
        out.classes[i - 1] = f;
        out.classes[i] = f * chi - e;
        out.names[i - 1] = coll.names[i];
        out.names[i] = "R_" + coll.names[i] + "(" + coll.names[i - 1] + ")";
    }
    return out;
}

bool check_exceptional(const ExcCollection& coll, const VarietyData& x) {
    for (int i = 0; i < 4; ++i) {
        if (euler(coll.classes[i], coll.classes[i], x) != 1) return false;
        for (int j = i + 1; j < 4; ++j) {
            if (euler(coll.classes[j], coll.classes[i], x) != 0) return false;
        }
    }
    return true;
}

ThetaMembership theta_membership(const AlgebraicDatum& d) {
    ThetaMembership t;
    for (double m : d.m) {
        if (!(m > 0)) return t;
    }
    t.in_theta = true;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            const int gap = j - i;
            if (!(d.phi[j] - d.phi[i] > gap * (gap + 1) / 2.0)) t.in_theta = false;
        }
    }
    t.in_theta_star = t.in_theta;
    for (int i = 0; i + 1 < 4; ++i) {
        if (!(d.phi[i + 1] - d.phi[i] >= 1.0)) t.in_theta_star = false;
    }
    return t;
}

namespace {

std::complex<double> target(const AlgebraicDatum& d, int j) {
    return std::polar(d.m[j], std::numbers::pi * d.phi[j]);
}

}  // namespace

ChargeSpec<double> algebraic_charge(const ExcCollection& coll, const AlgebraicDatum& d) {
    // Rows (e3, e2, e1, e0) of each class, matching the coefficient order.
    linalg::Mat4<Rational> exact{};
    linalg::Mat4<double> m{};
    for (int j = 0; j < 4; ++j) {
        const ChernVector& v = coll.classes[j];
        exact[j] = {v.e3, v.e2, v.e1, v.e0};
        m[j] = {to_double(v.e3), to_double(v.e2), to_double(v.e1), to_double(v.e0)};
    }
    if (linalg::determinant(exact) == 0) throw SingularBasis();
    linalg::Vec4<double> re{}, im{};
    for (int j = 0; j < 4; ++j) {
        const std::complex<double> z = target(d, j);
        re[j] = z.real();
        im[j] = z.imag();
    }
    const auto xr = linalg::solve(m, re, 0.0);
    const auto xi = linalg::solve(m, im, 0.0);
    if (!xr || !xi) throw SingularBasis();
    ChargeSpec<double> s;
    s.real_coeffs = *xr;
    s.imag_coeffs = *xi;
    return s;
}

double algebraic_residual(const ExcCollection& coll, const AlgebraicDatum& d, const ChargeSpec<double>& spec) {
    double worst = 0.0;
    for (int j = 0; j < 4; ++j) {
        const Complex<double> z = z_eval(spec, coll.classes[j].cast<double>());
        worst = std::max(worst, std::abs(to_std(z) - target(d, j)));
    }
    return worst;
}

}  // namespace bstab
