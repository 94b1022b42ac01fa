#pragma once

#include "bstab/charges.hpp"
#include "bstab/chern.hpp"
#include "bstab/parallel.hpp"
#include "bstab/quadforms.hpp"
#include "bstab/slopes.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace bstab {

template <Scalar T>
struct XiBound {
    T mid{};
    T xi{};
    /// Range of H ch2^beta / H^2 ch1^beta allowed at this nu.
    double window_lo = 0.0;
    double window_hi = 0.0;
};

/// mid = alpha^2/6 + |2nu/3 - b| (nu + alpha/2),
/// xi  = alpha^2/6 + (2nu/3 - b)^2/2 + (nu + alpha/2)^2/2.
template <Scalar T>
XiBound<T> xi_bound(const T& alpha, const T& b, const T& nu) {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    const T u = T(2) * nu / 3 - b;
    const T w = nu + alpha / 2;
    XiBound<T> r;
    r.mid = alpha * alpha / 6 + abs_of(u) * w;
    r.xi = alpha * alpha / 6 + u * u / 2 + w * w / 2;
    const double n = to_double(nu), a = to_double(alpha);
    r.window_lo = (n - std::sqrt(n * n + a * a)) / 2;
    r.window_hi = (n + std::sqrt(n * n + a * a)) / 2;
    return r;
}

/// Upper bound for the objective over real classes with Delta >= 0,
/// Q^beta_{alpha^2} >= 0, ch1^beta > 0 and |nu| <= w (nu with one alpha cancelled):
/// alpha^2/6 + (2 alpha w/3 + |b|) alpha (w + sqrt(w^2 + 1)) / 2.
inline double mid_bound_window(double alpha, double b, double w) {
    return alpha * alpha / 6 + (2 * alpha * w / 3 + std::abs(b)) * alpha * (w + std::sqrt(w * w + 1)) / 2;
}

/// (ch3^beta - b ch2^beta) / ch1^beta.
template <Scalar T>
T psi_objective(const BasicChern<T>& v, const T& beta, const T& b) {
    const BasicChern<T> z = twist(v, beta);
    return (z.e3 - b * z.e2) / z.e1;
}

struct PsiOptions {
    long box_bound = 8;
    double nu_window = 1e-3;
    bool semi_homogeneous = false;
    unsigned workers = 1;
    double tol = kDefaultTolerance;
};

template <Scalar T>
struct PsiEstimate {
    T closed_form{};
    std::optional<T> lower;  ///< empty: no witness qualified (-infinity)
    std::optional<T> upper;  ///< empty: no lattice class qualified (-infinity)
    std::optional<ChernVector> lower_witness;
    std::string lower_label;
    std::optional<ChernVector> upper_witness;
    double nu_window = 0.0;
    long box_bound = 0;
    double mid_bound = 0.0;
};

namespace detail {

template <Scalar T>
struct Best {
    std::optional<T> value;
    std::optional<ChernVector> cls;
    std::string label;

    /// Larger objective wins; ties go to the lexicographically larger lattice point.
    void offer(const T& obj, const ChernVector& v, const std::string& name) {
        if (value) {
            if (obj < *value) return;
            if (obj == *value && !(to_lattice(v) > to_lattice(*cls))) return;
        }
        value = obj;
        cls = v;
        label = name;
    }
};

template <Scalar T>
bool in_window(const BasicChern<T>& v, const T& alpha, const T& beta, const T& window, double tol) {
    const BasicChern<T> z = twist(v, beta);
    if (sign_of(z.e1, tol) <= 0) return false;
    const T n = (z.e2 - alpha * alpha / 2 * z.e0) / (alpha * z.e1);
    return sign_of(T(abs_of(n) - window), tol) < 0;
}

inline std::string shifted_label(const std::string& base, int shift) {
    return shift == 0 ? base : base + "[" + std::to_string(shift) + "]";
}

}  // namespace detail

/// Lower bound for Psi from witness objects with |nu| < window. Witnesses are
/// line bundles, Steiner bundles and their dual twists (all tensored by O(c)),
/// and optionally semi-homogeneous classes, each possibly shifted by [1].
template <Scalar T>
void psi_lower(PsiEstimate<T>& est, const T& alpha, const T& beta, const T& b, const PsiOptions& opt) {
    const long n = opt.box_bound;
    const T window = from_double<T>(opt.nu_window);
    const long base = floor_to_long(beta, opt.tol);
    detail::Best<T> best;
    auto consider = [&](const ChernVector& v, const std::string& name) {
        for (int s = 0; s < 2; ++s) {
            const ChernVector u = s == 0 ? v : -v;
            const BasicChern<T> ut = u.template cast<T>();
            if (!detail::in_window(ut, alpha, beta, window, opt.tol)) continue;
            if (sign_of(delta_bar(ut), opt.tol) < 0) continue;
            best.offer(psi_objective(ut, beta, b), u, detail::shifted_label(name, s));
        }
    };
    for (long d = base - n; d <= base + n + 1; ++d) {
        consider(classes::line_bundle(d), "O(" + std::to_string(d) + ")");
    }
    for (long t = 1; t <= n; ++t) {
        for (long r = 1; r <= n; ++r) {
            // Stable Steiner bundles only: r < (1 + sqrt 3) t.
            if (r > t && (r - t) * (r - t) >= 3 * t * t) continue;
            const ChernVector st{Rational(r), Rational(t), Rational(-t, 2), Rational(t, 6)};
            const ChernVector dt = tensor_line(dual(st), 1);
            for (long c = base - n; c <= base + n + 1; ++c) {
                const std::string tw = "(" + std::to_string(c) + ")";
                const std::string tr = std::to_string(t) + "," + std::to_string(r);
                consider(tensor_line(st, c), "steiner(" + tr + ")" + tw);
                consider(tensor_line(dt, c), "steiner_dual(" + tr + ")" + tw);
            }
        }
    }
    if (opt.semi_homogeneous) {
        for (long q = 1; q <= n; ++q) {
            for (long p = (base - n) * q; p <= (base + n + 1) * q; ++p) {
                const Rational s(p, q);
                const ChernVector v{Rational(1), s, s * s / 2, s * s * s / 6};
                consider(v, "semihomog(" + std::to_string(p) + "/" + std::to_string(q) + ")");
            }
        }
    }
    est.lower = best.value;
    est.lower_witness = best.cls;
    est.lower_label = best.label;
}

/// Feasibility upper bound: maximizes the objective over lattice classes with
/// 0 < ch1^beta <= N, |ch2^beta| <= N, |nu| < window, Delta >= 0, taking for
/// each (e0, e1, e2) the largest e3 allowed by Q^beta_{alpha^2} >= 0. These
/// classes need not be realized by semistable objects.
template <Scalar T>
void psi_upper(PsiEstimate<T>& est, const T& alpha, const T& beta, const T& b, const PsiOptions& opt) {
    const long n = opt.box_bound;
    const T window = from_double<T>(opt.nu_window);
    const double ad = to_double(alpha), bd = to_double(beta), wd = opt.nu_window;
    const T a2 = alpha * alpha;

    auto row = [&](std::size_t idx) {
        detail::Best<T> best;
        const long n0 = static_cast<long>(idx) - n;
        const double lo1 = bd * n0, hi1 = bd * n0 + n;
        for (long n1 = static_cast<long>(std::floor(lo1)); n1 <= static_cast<long>(std::floor(hi1)) + 1; ++n1) {
            const T z1 = T(n1) - beta * T(n0);
            if (sign_of(z1, opt.tol) <= 0 || sign_of(T(z1 - T(n)), opt.tol) > 0) continue;
            const double z1d = to_double(z1);
            const double centre = ad * ad / 2 * n0 + bd * n1 - bd * bd / 2 * n0;
            const double half = wd * ad * z1d;
            const long lo2 = static_cast<long>(std::floor(2 * (centre - half))) - 1;
            const long hi2 = static_cast<long>(std::ceil(2 * (centre + half))) + 1;
            for (long n2 = lo2; n2 <= hi2; ++n2) {
                ChernVector v{Rational(n0), Rational(n1), Rational(n2, 2), Rational(0)};
                BasicChern<T> z = twist(v.template cast<T>(), beta);
                if (sign_of(T(abs_of(z.e2) - T(n)), opt.tol) > 0) continue;
                if (!detail::in_window(v.template cast<T>(), alpha, beta, window, opt.tol)) continue;
                const T db = delta_bar(v.template cast<T>());
                if (sign_of(db, opt.tol) < 0) continue;
                // Largest zeta3 with alpha^2 Delta + 4 zeta2^2 - 6 zeta1 zeta3 >= 0.
                z.e3 = (a2 * db + 4 * z.e2 * z.e2) / (6 * z.e1);
                const T e3 = twist(z, T(-beta)).e3;
                v.e3 = Rational(floor_to_long(T(6 * e3), opt.tol), 6);
                const BasicChern<T> vt = v.template cast<T>();
                best.offer(psi_objective(vt, beta, b), v, "");
            }
        }
        return best;
    };
    const auto rows = parallel_map<detail::Best<T>>(static_cast<std::size_t>(2 * n + 1), opt.workers, row);
    detail::Best<T> best;
    for (const auto& r : rows) {
        if (r.value) best.offer(*r.value, *r.cls, "");
    }
    est.upper = best.value;
    est.upper_witness = best.cls;
}

template <Scalar T>
PsiEstimate<T> psi_estimate(const T& alpha, const T& beta, const T& b, const PsiOptions& opt = {}) {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    if (opt.box_bound < 1) throw std::invalid_argument("box bound must be at least 1");
    if (!(opt.nu_window > 0)) throw std::invalid_argument("nu window must be positive");
    PsiEstimate<T> est;
    est.closed_form = alpha * alpha / 6 + alpha * abs_of(b) / 2;
    est.nu_window = opt.nu_window;
    est.box_bound = opt.box_bound;
    est.mid_bound = mid_bound_window(to_double(alpha), to_double(b), opt.nu_window);
    psi_lower(est, alpha, beta, b, opt);
    psi_upper(est, alpha, beta, b, opt);
    return est;
}

/// Three-valued membership: Unknown when a Psi bracket straddles a.
enum class Tri { False, True, Unknown };

std::string_view to_string(Tri t);

struct RegionFlags {
    Tri in_B = Tri::False;
    Tri in_B_Psi = Tri::False;
    Tri in_B_star_Psi = Tri::False;
};

/// On P^3 the Psi proxy is the closed form; elsewhere it is the
/// [lower, upper] bracket of the estimate.
template <Scalar T>
RegionFlags region_membership(const T& alpha, const T& a, const T& b, const PsiEstimate<T>& psi, bool p3 = true) {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    auto above = [&](const std::optional<T>& lo, const std::optional<T>& hi, const std::optional<T>& extra) {
        // a > max(extra, proxy) with proxy in [lo, hi]; empty bounds are -infinity.
        if (extra && !(a > *extra)) return Tri::False;
        if (!hi || a > *hi) return Tri::True;
        if (lo && !(a > *lo)) return Tri::False;
        return Tri::Unknown;
    };
    RegionFlags f;
    f.in_B = a > alpha * alpha / 6 + alpha * abs_of(b) / 2 ? Tri::True : Tri::False;
    std::optional<T> lo = p3 ? std::optional<T>(psi.closed_form) : psi.lower;
    std::optional<T> hi = p3 ? std::optional<T>(psi.closed_form) : psi.upper;
    if (lo && hi && *lo > *hi) hi = lo;
    f.in_B_Psi = above(lo, hi, T(alpha * alpha / 6));
    f.in_B_star_Psi = above(lo, hi, std::nullopt);
    return f;
}

/// Lattice classes with ch1^beta > 0 in the box on which Z^{a,b}_{alpha,beta}
/// vanishes, with Delta >= 0 and Q^beta_{alpha^2} >= 0. Sorted by lattice point.
template <Scalar T>
std::vector<ChernVector> boundary_witness_search(const T& alpha, const T& beta, const T& a, const T& b,
                                                 long box_bound, double tol = kDefaultTolerance) {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    const long n = box_bound;
    const double bd = to_double(beta);
    const T a2 = alpha * alpha;
    std::vector<ChernVector> out;
    for (long n0 = -n; n0 <= n; ++n0) {
        for (long n1 = static_cast<long>(std::floor(bd * n0)); n1 <= static_cast<long>(std::floor(bd * n0 + n)) + 1;
             ++n1) {
            const T z1 = T(n1) - beta * T(n0);
            if (sign_of(z1, tol) <= 0 || sign_of(T(z1 - T(n)), tol) > 0) continue;
            // Im Z = 0 fixes zeta2; Re Z = 0 then fixes zeta3.
            const T z2 = a2 / 2 * T(n0);
            if (sign_of(T(abs_of(z2) - T(n)), tol) > 0) continue;
            const T z3 = b * z2 + a * z1;
            const BasicChern<T> e = twist(BasicChern<T>{T(n0), z1, z2, z3}, T(-beta));
            const T twice2 = 2 * e.e2, six3 = 6 * e.e3;
            const long n2 = floor_to_long(T(twice2 + T(1) / 2), tol);
            const long n3 = floor_to_long(T(six3 + T(1) / 2), tol);
            if (!is_zero(T(twice2 - T(n2)), tol) || !is_zero(T(six3 - T(n3)), tol)) continue;
            const ChernVector v = from_lattice({n0, n1, n2, n3});
            const BasicChern<T> vt = v.template cast<T>();
            if (sign_of(delta_bar(vt), tol) < 0) continue;
            if (sign_of(q_form(vt, a2, beta), tol) < 0) continue;
            out.push_back(v);
        }
    }
    std::sort(out.begin(), out.end(), [](const ChernVector& x, const ChernVector& y) {
        return to_lattice(x) < to_lattice(y);
    });
    return out;
}

}  // namespace bstab
