#pragma once

#include "bstab/chern.hpp"

#include <array>
#include <complex>
#include <optional>
#include <stdexcept>
#include <variant>

namespace bstab {

class ZeroCharge : public std::runtime_error {
public:
    ZeroCharge() : std::runtime_error("central charge vanishes") {}
};

class Degenerate : public std::runtime_error {
public:
    Degenerate() : std::runtime_error("Z(O_x) = 0: charge cannot be normalized") {}
};

class NotGeometric : public std::runtime_error {
public:
    NotGeometric() : std::runtime_error("coefficient of H ch2 in Im Z is not positive") {}
};

/// Complex number over either backend (std::complex is unspecified for Rational).
template <Scalar T>
struct Complex {
    T re{}, im{};
    friend bool operator==(const Complex&, const Complex&) = default;
    Complex operator+(const Complex& o) const { return {re + o.re, im + o.im}; }
    Complex operator-(const Complex& o) const { return {re - o.re, im - o.im}; }
    Complex operator*(const Complex& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    Complex conj() const { return {re, -im}; }
    T norm2() const { return re * re + im * im; }
};

inline std::complex<double> to_std(const Complex<double>& z) { return {z.re, z.im}; }

template <Scalar T>
struct TiltTag {
    T alpha, beta;
};
template <Scalar T>
struct FullTag {
    T alpha, beta, a, b;
};
template <Scalar T>
struct GeneralTag {
    T a, b, c, d, beta;
};

/// Central charge Z(v) = sum re[k] * x_k + i sum im[k] * x_k with
/// x = (e3, e2, e1, e0) untwisted lattice coordinates.
template <Scalar T>
struct ChargeSpec {
    std::array<T, 4> real_coeffs{};
    std::array<T, 4> imag_coeffs{};
    std::variant<std::monostate, TiltTag<T>, FullTag<T>, GeneralTag<T>> tag{};
};

namespace detail {

/// Pulls back a linear functional written in twisted coordinates
/// (zeta3, zeta2, zeta1, zeta0) to untwisted (e3, e2, e1, e0).
template <Scalar T>
std::array<T, 4> pull_back_twist(const std::array<T, 4>& c, const T& beta) {
    // zeta = twist(e, beta); evaluate the functional on the images of the basis vectors.
    std::array<T, 4> out{};
    for (int k = 0; k < 4; ++k) {
        BasicChern<T> basis{};
        basis[3 - k] = T(1);
        BasicChern<T> z = twist(basis, beta);
        out[k] = c[0] * z.e3 + c[1] * z.e2 + c[2] * z.e1 + c[3] * z.e0;
    }
    return out;
}

}  // namespace detail

/// Tilt charge: -ch3^b + a^2/2 ch1^b + i alpha (ch2^b - a^2/6 ch0).
template <Scalar T>
ChargeSpec<T> tilt_charge(const T& alpha, const T& beta) {
    const T a2 = alpha * alpha;
    ChargeSpec<T> s;
    s.real_coeffs = detail::pull_back_twist<T>({T(-1), T(0), a2 / 2, T(0)}, beta);
    s.imag_coeffs = detail::pull_back_twist<T>({T(0), alpha, T(0), -alpha * a2 / 6}, beta);
    s.tag = TiltTag<T>{alpha, beta};
    return s;
}

/// Z^{a,b}_{alpha,beta} = -ch3^b + b ch2^b + a ch1^b + i (ch2^b - alpha^2/2 ch0).
template <Scalar T>
ChargeSpec<T> full_charge(const T& alpha, const T& beta, const T& a, const T& b) {
    ChargeSpec<T> s;
    s.real_coeffs = detail::pull_back_twist<T>({T(-1), b, a, T(0)}, beta);
    s.imag_coeffs = detail::pull_back_twist<T>({T(0), T(1), T(0), -alpha * alpha / 2}, beta);
    s.tag = FullTag<T>{alpha, beta, a, b};
    return s;
}

/// Z^{a,b,c}_{d,beta} = -ch3^b + b ch2^b + a ch1^b + c ch0 + i (ch2^b - d ch0).
template <Scalar T>
ChargeSpec<T> general_charge(const T& a, const T& b, const T& c, const T& d, const T& beta) {
    ChargeSpec<T> s;
    s.real_coeffs = detail::pull_back_twist<T>({T(-1), b, a, c}, beta);
    s.imag_coeffs = detail::pull_back_twist<T>({T(0), T(1), T(0), -d}, beta);
    s.tag = GeneralTag<T>{a, b, c, d, beta};
    return s;
}

/// Evaluates the coefficient form.
template <Scalar T>
Complex<T> z_eval(const ChargeSpec<T>& spec, const BasicChern<T>& v) {
    const std::array<T, 4> x{v.e3, v.e2, v.e1, v.e0};
    Complex<T> z{T(0), T(0)};
    for (int k = 0; k < 4; ++k) {
        z.re += spec.real_coeffs[k] * x[k];
        z.im += spec.imag_coeffs[k] * x[k];
    }
    return z;
}

/// Evaluates a tagged form directly from its defining formula in twisted
/// coordinates, bypassing the coefficient expansion. Throws on untagged specs.
template <Scalar T>
Complex<T> z_eval_tagged(const ChargeSpec<T>& spec, const BasicChern<T>& v) {
    if (auto* t = std::get_if<TiltTag<T>>(&spec.tag)) {
        const BasicChern<T> z = twist(v, t->beta);
        const T a2 = t->alpha * t->alpha;
        return {-z.e3 + a2 / 2 * z.e1, t->alpha * (z.e2 - a2 / 6 * z.e0)};
    }
    if (auto* f = std::get_if<FullTag<T>>(&spec.tag)) {
        const BasicChern<T> z = twist(v, f->beta);
        return {-z.e3 + f->b * z.e2 + f->a * z.e1, z.e2 - f->alpha * f->alpha / 2 * z.e0};
    }
    if (auto* g = std::get_if<GeneralTag<T>>(&spec.tag)) {
        const BasicChern<T> z = twist(v, g->beta);
        return {-z.e3 + g->b * z.e2 + g->a * z.e1 + g->c * z.e0, z.e2 - g->d * z.e0};
    }
    throw std::invalid_argument("charge has no normal-form tag");
}

template <Scalar T>
ChargeSpec<double> to_double_spec(const ChargeSpec<T>& s) {
    if constexpr (std::same_as<T, double>) {
        return s;
    } else {
        ChargeSpec<double> out;
        for (int k = 0; k < 4; ++k) {
            out.real_coeffs[k] = to_double(s.real_coeffs[k]);
            out.imag_coeffs[k] = to_double(s.imag_coeffs[k]);
        }
        std::visit(
            [&](const auto& tag) {
                using Tag = std::decay_t<decltype(tag)>;
                if constexpr (std::same_as<Tag, TiltTag<T>>) {
                    out.tag = TiltTag<double>{to_double(tag.alpha), to_double(tag.beta)};
                } else if constexpr (std::same_as<Tag, FullTag<T>>) {
                    out.tag = FullTag<double>{to_double(tag.alpha), to_double(tag.beta), to_double(tag.a),
                                              to_double(tag.b)};
                } else if constexpr (std::same_as<Tag, GeneralTag<T>>) {
                    out.tag = GeneralTag<double>{to_double(tag.a), to_double(tag.b), to_double(tag.c),
                                                 to_double(tag.d), to_double(tag.beta)};
                }
            },
            s.tag);
        return out;
    }
}

/// phi = shift + frac with frac in (0, 1].
struct PhaseValue {
    long shift = 0;
    double frac = 1.0;
    double total() const { return static_cast<double>(shift) + frac; }
    static PhaseValue from_total(double phi);
};

/// Phase of z on the branch (shift - 1, shift + 1]: the unique phi there with
/// e^{i pi phi} a positive multiple of z.
PhaseValue phase(std::complex<double> z, long shift = 0);

/// Exact variant: frac is rational-exact when z lies on an axis.
template <Scalar T>
PhaseValue phase(const Complex<T>& z, long shift = 0) {
    if (z.re == 0 && z.im == 0) throw ZeroCharge();
    return phase(std::complex<double>(to_double(z.re), to_double(z.im)), shift);
}

/// Element (T, f) of the universal cover of GL+(2, R). `matrix` is T
/// (row-major, acting on R^2 = C); `lift_base` is f(0).
struct GLTilde {
    std::array<double, 4> matrix{1, 0, 0, 1};
    double lift_base = 0.0;

    static GLTilde identity() { return {}; }
    double det() const { return matrix[0] * matrix[3] - matrix[1] * matrix[2]; }
    /// Phase lift f, increasing with f(phi + 1) = f(phi) + 1.
    double lift(double phi) const;
    double lift_inverse(double psi) const;
    /// Group product: acting by *this then by other equals acting by compose(other).
    GLTilde compose(const GLTilde& other) const;
    /// Lift base f(0) = arg(T 1) / pi in (-1, 1].
    static GLTilde from_matrix(const std::array<double, 4>& m);
};

/// Z[g] = T^{-1} Z with phases mapped by f^{-1}.
ChargeSpec<double> group_act(const GLTilde& g, const ChargeSpec<double>& spec);
std::optional<PhaseValue> group_act_phase(const GLTilde& g, std::optional<PhaseValue> phi);

/// C-action lambda = x + i y: Z -> e^{-i pi x + pi y} Z, phases shift by -x.
ChargeSpec<double> complex_act(std::complex<double> lambda, const ChargeSpec<double>& spec);
std::optional<PhaseValue> complex_act_phase(std::complex<double> lambda, std::optional<PhaseValue> phi);

struct Normalization {
    GLTilde g;                  ///< spec = normal_form[g^{-1}], i.e. normal_form = spec[g]
    ChargeSpec<double> normal;  ///< tagged General, or Full when d > 0
};

/// Reduces a charge to Z^{a,b,c}_{d,beta}, and to Z^{a,b}_{alpha,beta} when d > 0.
Normalization normalize(const ChargeSpec<double>& spec, double tol = kDefaultTolerance);

/// Checks Z^{a,b}_{alpha,beta}(v (x) O(-c)) = Z^{a,b}_{alpha,beta+c}(v).
template <Scalar T>
bool twist_equivariance_check(const BasicChern<T>& v, const T& alpha, const T& beta, const T& a, const T& b,
                              long c) {
    const Complex<T> lhs = z_eval(full_charge(alpha, beta, a, b), tensor_line(v, -c));
    const Complex<T> rhs = z_eval(full_charge(alpha, T(beta + T(c)), a, b), v);
    if constexpr (std::same_as<T, double>) {
        return std::abs(lhs.re - rhs.re) <= kDefaultTolerance * (1 + std::abs(lhs.re)) &&
               std::abs(lhs.im - rhs.im) <= kDefaultTolerance * (1 + std::abs(lhs.im));
    } else {
        return lhs == rhs;
    }
}

}  // namespace bstab
