#pragma once

#include "bstab/charges.hpp"
#include "bstab/chern.hpp"
#include "bstab/linalg.hpp"
#include "bstab/slopes.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bstab {

class MissingParam : public std::invalid_argument {
public:
    explicit MissingParam(const std::string& what) : std::invalid_argument("missing parameter: " + what) {}
};

class DegenerateKernel : public std::runtime_error {
public:
    DegenerateKernel() : std::runtime_error("charge coefficients have rank < 2") {}
};

enum class FormKind { DeltaBar, NablaBar, QK, SDelta, SDeltaEps };

/// Knobs selecting a Bogomolov-type form. Unused fields may stay empty.
template <Scalar T>
struct FormParams {
    std::optional<T> K;
    std::optional<T> delta;
    std::optional<T> epsilon;
    // Charge parameters for the S forms.
    std::optional<T> alpha;
    std::optional<T> a;
    std::optional<T> b;
};

/// Symmetric form over untwisted lattice coordinates (e0, e1, e2, e3).
template <Scalar T>
struct QuadForm {
    linalg::Mat4<T> gram{};
    std::string label;

    T operator()(const BasicChern<T>& v) const { return linalg::quad(gram, {v.e0, v.e1, v.e2, v.e3}); }
};

namespace detail {

template <Scalar T>
const T& need(const std::optional<T>& x, const char* name) {
    if (!x) throw MissingParam(name);
    return *x;
}

/// The twist as a matrix: zeta = P e.
template <Scalar T>
linalg::Mat4<T> twist_matrix(const T& beta) {
    linalg::Mat4<T> p{};
    for (int k = 0; k < 4; ++k) {
        BasicChern<T> basis{};
        basis[k] = T(1);
        const BasicChern<T> z = twist(basis, beta);
        for (int i = 0; i < 4; ++i) p[i][k] = z[i];
    }
    return p;
}

/// G_e = P^T G_zeta P.
template <Scalar T>
linalg::Mat4<T> pull_back(const linalg::Mat4<T>& g, const T& beta) {
    const linalg::Mat4<T> p = twist_matrix(beta);
    linalg::Mat4<T> out{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            T s{0};
            for (int k = 0; k < 4; ++k) {
                for (int l = 0; l < 4; ++l) s += p[k][i] * g[k][l] * p[l][j];
            }
            out[i][j] = s;
        }
    }
    return out;
}

template <Scalar T>
void add_scaled(linalg::Mat4<T>& acc, const linalg::Mat4<T>& g, const T& s) {
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) acc[i][j] += s * g[i][j];
    }
}

/// zeta-coordinate Grams.
template <Scalar T>
linalg::Mat4<T> delta_bar_zeta() {
    linalg::Mat4<T> g{};
    g[1][1] = T(1);
    g[0][2] = g[2][0] = T(-1);
    return g;
}

template <Scalar T>
linalg::Mat4<T> nabla_bar_zeta() {
    linalg::Mat4<T> g{};
    g[2][2] = T(4);
    g[1][3] = g[3][1] = T(-3);
    return g;
}

template <Scalar T>
linalg::Mat4<T> s_delta_zeta(const T& delta, const T& alpha, const T& a, const T& b) {
    const T a2 = alpha * alpha;
    linalg::Mat4<T> g{};
    // delta^{-1} (zeta2 - a2/2 zeta0)^2
    g[2][2] = T(1) / delta;
    g[0][2] = g[2][0] = -a2 / (2 * delta);
    g[0][0] = a2 * a2 / (4 * delta);
    // - zeta1 (zeta3 - b zeta2 - (a - delta) zeta1)
    g[1][3] = g[3][1] = T(-1) / 2;
    g[1][2] = g[2][1] = b / 2;
    g[1][1] = a - delta;
    return g;
}

}  // namespace detail

template <Scalar T>
QuadForm<T> make_form(FormKind kind, const T& beta, const FormParams<T>& p) {
    using namespace detail;
    QuadForm<T> q;
    switch (kind) {
        case FormKind::DeltaBar:
            q.gram = delta_bar_zeta<T>();  // twist invariant
            q.label = "DeltaBar";
            break;
        case FormKind::NablaBar:
            q.gram = pull_back(nabla_bar_zeta<T>(), beta);
            q.label = "NablaBar";
            break;
        case FormKind::QK: {
            linalg::Mat4<T> g = nabla_bar_zeta<T>();
            add_scaled(g, delta_bar_zeta<T>(), need(p.K, "K"));
            q.gram = pull_back(g, beta);
            q.label = "Q_K";
            break;
        }
        case FormKind::SDelta:
        case FormKind::SDeltaEps: {
            const T& delta = need(p.delta, "delta");
            if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
            const T& alpha = need(p.alpha, "alpha");
            const T& a = need(p.a, "a");
            linalg::Mat4<T> g = s_delta_zeta(delta, alpha, a, need(p.b, "b"));
            q.label = "S_delta";
            if (kind == FormKind::SDeltaEps) {
                const T k = (alpha * alpha + 6 * a) / 2;
                linalg::Mat4<T> qk = nabla_bar_zeta<T>();
                add_scaled(qk, delta_bar_zeta<T>(), k);
                add_scaled(g, qk, need(p.epsilon, "epsilon"));
                q.label = "S_delta_eps";
            }
            q.gram = pull_back(g, beta);
            break;
        }
    }
    return q;
}

/// Direct formula evaluation, independent of the Gram matrices.
template <Scalar T>
T quad_eval(FormKind kind, const BasicChern<T>& v, const T& beta, const FormParams<T>& p) {
    using detail::need;
    const BasicChern<T> z = twist(v, beta);
    const T delta_bar = v.e1 * v.e1 - 2 * v.e0 * v.e2;
    const T nabla_bar = 4 * z.e2 * z.e2 - 6 * z.e1 * z.e3;
    switch (kind) {
        case FormKind::DeltaBar:
            return delta_bar;
        case FormKind::NablaBar:
            return nabla_bar;
        case FormKind::QK:
            return need(p.K, "K") * delta_bar + nabla_bar;
        case FormKind::SDelta:
        case FormKind::SDeltaEps: {
            const T& delta = need(p.delta, "delta");
            if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
            const T& alpha = need(p.alpha, "alpha");
            const T& a = need(p.a, "a");
            const T& b = need(p.b, "b");
            const T im = z.e2 - alpha * alpha / 2 * z.e0;
            T s = im * im / delta - z.e1 * (z.e3 - b * z.e2 - (a - delta) * z.e1);
            if (kind == FormKind::SDeltaEps) {
                const T k = (alpha * alpha + 6 * a) / 2;
                s += need(p.epsilon, "epsilon") * (k * delta_bar + nabla_bar);
            }
            return s;
        }
    }
    return T(0);
}

template <Scalar T>
T delta_bar(const BasicChern<T>& v) {
    return v.e1 * v.e1 - 2 * v.e0 * v.e2;
}

/// Q^beta_K = K DeltaBar + NablaBar^beta.
template <Scalar T>
T q_form(const BasicChern<T>& v, const T& K, const T& beta) {
    const BasicChern<T> z = twist(v, beta);
    return K * delta_bar(v) + 4 * z.e2 * z.e2 - 6 * z.e1 * z.e3;
}

struct BgReport {
    bool classical = false;
    std::optional<bool> generalized;  ///< empty: nu != 0, not applicable
    std::optional<bool> bmt_strict;
};

template <Scalar T>
BgReport bg_report(const BasicChern<T>& v, const T& alpha, const T& beta, double tol = kDefaultTolerance) {
    const BasicChern<T> z = twist(v, beta);
    BgReport r;
    r.classical = sign_of(T(z.e1 * z.e1 - 2 * z.e0 * z.e2), tol) >= 0;
    const ExtendedSlope<T> n = nu(v, alpha, beta);
    if (!n.is_infinite() && is_zero(*n.value, tol)) {
        const T a2 = alpha * alpha;
        r.generalized = sign_of(T(z.e3 - a2 / 6 * z.e1), tol) <= 0;
        r.bmt_strict = sign_of(T(z.e3 - a2 / 2 * z.e1), tol) < 0;
    }
    return r;
}

enum class Definiteness { NegDefinite, NegSemiDefinite, Indefinite, PosSemiDefinite };

std::string_view to_string(Definiteness d);

template <Scalar T>
using Gram2 = std::array<std::array<T, 2>, 2>;

/// Leading-principal-minor classification (exact on rationals).
template <Scalar T>
Definiteness classify_minors(const Gram2<T>& g, double tol = kDefaultTolerance) {
    const T det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    const int sd = sign_of(det, tol);
    const int s0 = sign_of(g[0][0], tol);
    const int s1 = sign_of(g[1][1], tol);
    if (sd < 0) return Definiteness::Indefinite;
    if (sd > 0) return s0 < 0 ? Definiteness::NegDefinite : Definiteness::PosSemiDefinite;
    if (s0 <= 0 && s1 <= 0) return Definiteness::NegSemiDefinite;
    if (s0 >= 0 && s1 >= 0) return Definiteness::PosSemiDefinite;
    return Definiteness::Indefinite;
}

/// Eigenvalue classification with tolerance.
Definiteness classify_eigen(const Gram2<double>& g, double tol = kDefaultTolerance);

template <Scalar T>
struct KernelRestriction {
    std::vector<linalg::Vec4<T>> basis;  ///< in (e0, e1, e2, e3) coordinates
    Gram2<T> gram2{};
    Definiteness verdict = Definiteness::Indefinite;
};

/// Basis of Ker Z in (e0, e1, e2, e3) coordinates.
template <Scalar T>
std::vector<linalg::Vec4<T>> kernel_basis(const ChargeSpec<T>& spec) {
    const linalg::Vec4<T> re{spec.real_coeffs[3], spec.real_coeffs[2], spec.real_coeffs[1], spec.real_coeffs[0]};
    const linalg::Vec4<T> im{spec.imag_coeffs[3], spec.imag_coeffs[2], spec.imag_coeffs[1], spec.imag_coeffs[0]};
    auto basis = linalg::nullspace<T>({re, im});
    if (basis.size() != 2) throw DegenerateKernel();
    return basis;
}

template <Scalar T>
KernelRestriction<T> kernel_restrict(const QuadForm<T>& q, const ChargeSpec<T>& spec, double tol = kDefaultTolerance) {
    KernelRestriction<T> r;
    r.basis = kernel_basis(spec);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) r.gram2[i][j] = linalg::bilinear(q.gram, r.basis[i], r.basis[j]);
    }
    if constexpr (std::same_as<T, double>) {
        r.verdict = classify_eigen(r.gram2, tol);
    } else {
        r.verdict = classify_minors(r.gram2, tol);
    }
    return r;
}

/// Open interval of K with Q^beta_K negative definite on Ker Z^{a,b}_{alpha,beta}.
struct SupportInterval {
    std::optional<double> k_min;  ///< empty: -infinity
    std::optional<double> k_max;  ///< empty: +infinity
    bool empty = true;

    bool contains(double k) const {
        if (empty) return false;
        return (!k_min || k > *k_min) && (!k_max || k < *k_max);
    }
};

SupportInterval support_interval(double alpha, double beta, double a, double b, double tol = kDefaultTolerance);

/// Largest epsilon in {2^-1, ..., 2^-40} making S_{delta,eps} negative definite
/// on Ker Z^{a,b}_{alpha,beta}; empty when delta is outside (0, a - psi_bound)
/// or no grid value works. psi_bound defaults to alpha^2/6 + alpha |b| / 2.
std::optional<double> find_epsilon(double delta, double alpha, double beta, double a, double b,
                                   std::optional<double> psi_bound = std::nullopt);

template <Scalar T>
struct ImZResult {
    T value{};
    T expansion{};
    bool expansion_ok = false;
};

/// Im(dZ_t/dt conj Z_t) at t = 0 for Z_t = Z^{a,b}_{alpha, beta - t c}, by exact
/// cubic interpolation in t, checked against the closed zeta expansion.
template <Scalar T>
ImZResult<T> im_zprime_zbar(const BasicChern<T>& v, const T& alpha, const T& beta, const T& a, const T& b,
                            const T& c, double tol = kDefaultTolerance) {
    std::array<Complex<T>, 4> p;
    for (int t = 0; t < 4; ++t) {
        p[t] = z_eval(full_charge(alpha, T(beta - T(t) * c), a, b), v);
    }
    // Z_t is a cubic in t: p'(0) = (-11 p0 + 18 p1 - 9 p2 + 2 p3) / 6.
    const Complex<T> dz{(-11 * p[0].re + 18 * p[1].re - 9 * p[2].re + 2 * p[3].re) / 6,
                        (-11 * p[0].im + 18 * p[1].im - 9 * p[2].im + 2 * p[3].im) / 6};
    ImZResult<T> r;
    r.value = (dz * p[0].conj()).im;

    const BasicChern<T> z = twist(v, beta);
    const T a2 = alpha * alpha;
    r.expansion = c * (z.e2 * z.e2 - (a + a2 / 2) * z.e0 * z.e2 + a2 / 2 * b * z.e0 * z.e1 +
                       a2 * a / 2 * z.e0 * z.e0 - z.e1 * z.e3 + a * z.e1 * z.e1);
    if constexpr (std::same_as<T, double>) {
        r.expansion_ok = std::abs(r.value - r.expansion) <= tol * (1 + std::abs(r.value));
    } else {
        r.expansion_ok = r.value == r.expansion;
    }
    return r;
}

}  // namespace bstab
