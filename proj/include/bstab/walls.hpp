#pragma once

#include "bstab/chern.hpp"
#include "bstab/parallel.hpp"
#include "bstab/quadforms.hpp"
#include "bstab/slopes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bstab {

class BadInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Polynomial in (beta, s) with s = alpha^2; coeff[i][j] multiplies beta^i s^j.
template <Scalar T>
using WallPoly = std::array<std::array<T, 2>, 4>;

/// Numerical wall: the locus nu_{alpha,beta}(v) = nu_{alpha,beta}(w), i.e.
/// P(beta, alpha^2) = n_v d_w - n_w d_v = 0. A necessary-condition locus only.
template <Scalar T>
struct WallCurve {
    BasicChern<T> v, w;
    WallPoly<T> coeff{};
    bool identically_zero = false;
    std::vector<std::pair<double, double>> samples;  ///< (beta, alpha)

    T operator()(const T& beta, const T& s) const {
        T out{0};
        T bp{1};
        for (int i = 0; i < 4; ++i) {
            out += bp * (coeff[i][0] + coeff[i][1] * s);
            bp *= beta;
        }
        return out;
    }
};

namespace detail {

/// n_u = e2^beta - s/2 e0 as a polynomial in (beta, s).
template <Scalar T>
WallPoly<T> wall_numerator(const BasicChern<T>& u) {
    WallPoly<T> p{};
    p[0][0] = u.e2;
    p[1][0] = -u.e1;
    p[2][0] = u.e0 / 2;
    p[0][1] = -u.e0 / 2;
    return p;
}

/// d_u = e1^beta.
template <Scalar T>
WallPoly<T> wall_denominator(const BasicChern<T>& u) {
    WallPoly<T> p{};
    p[0][0] = u.e1;
    p[1][0] = -u.e0;
    return p;
}

/// Product truncated to beta-degree 3 and s-degree 1; exact for n * d.
template <Scalar T>
WallPoly<T> wall_mul(const WallPoly<T>& a, const WallPoly<T>& b) {
    WallPoly<T> out{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (a[i][j] == 0) continue;
            for (int k = 0; i + k < 4; ++k) {
                for (int l = 0; j + l < 2; ++l) out[i + k][j + l] += a[i][j] * b[k][l];
            }
        }
    }
    return out;
}

}  // namespace detail

template <Scalar T>
WallCurve<T> wall_conic(const BasicChern<T>& v, const BasicChern<T>& w) {
    using namespace detail;
    WallCurve<T> c;
    c.v = v;
    c.w = w;
    const WallPoly<T> lhs = wall_mul(wall_numerator(v), wall_denominator(w));
    const WallPoly<T> rhs = wall_mul(wall_numerator(w), wall_denominator(v));
    c.identically_zero = true;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 2; ++j) {
            c.coeff[i][j] = lhs[i][j] - rhs[i][j];
            if (c.coeff[i][j] != 0) c.identically_zero = false;
        }
    }
    return c;
}

/// Center and squared radius when the wall is the semicircle
/// (beta - center)^2 + alpha^2 = radius2 (numerical walls for classes of
/// equal rank are of this shape).
template <Scalar T>
struct WallCircle {
    T center{};
    T radius2{};
};

template <Scalar T>
std::optional<WallCircle<T>> circle_form(const WallCurve<T>& c) {
    const T& k = c.coeff[0][1];
    if (k == 0 || c.coeff[2][0] != k || c.coeff[3][0] != 0) return std::nullopt;
    for (int i = 1; i < 4; ++i) {
        if (c.coeff[i][1] != 0) return std::nullopt;
    }
    WallCircle<T> w;
    w.center = -c.coeff[1][0] / (2 * k);
    w.radius2 = w.center * w.center - c.coeff[0][0] / k;
    return w;
}

/// Samples the wall in the upper half plane over beta in [lo, hi]. Where the
/// wall is a vertical line (no s-dependence) alpha is sampled on (0, hi - lo].
template <Scalar T>
void sample_wall(WallCurve<T>& c, double lo, double hi, int samples) {
    c.samples.clear();
    if (c.identically_zero || samples < 1) return;
    auto p0 = [&](double b) {
        double s = 0, bp = 1;
        for (int i = 0; i < 4; ++i, bp *= b) s += to_double(c.coeff[i][0]) * bp;
        return s;
    };
    auto p1 = [&](double b) {
        double s = 0, bp = 1;
        for (int i = 0; i < 4; ++i, bp *= b) s += to_double(c.coeff[i][1]) * bp;
        return s;
    };
    bool s_free = true;
    for (int i = 0; i < 4; ++i) s_free = s_free && c.coeff[i][1] == 0;
    const int n = std::max(samples, 2);
    if (s_free) {
        // Vertical walls: sign changes of p0 on the grid, refined by bisection.
        for (int k = 0; k + 1 < n; ++k) {
            double a = lo + (hi - lo) * k / (n - 1), b = lo + (hi - lo) * (k + 1) / (n - 1);
            double fa = p0(a), fb = p0(b);
            if (fa == 0) {
                b = a;
            } else if (fa * fb > 0 || fb == 0) {
                continue;
            } else {
                for (int it = 0; it < 200; ++it) {
                    const double m = (a + b) / 2;
                    if ((p0(m) > 0) == (fa > 0)) {
                        a = m;
                    } else {
                        b = m;
                    }
                }
            }
            const double root = (a + b) / 2;
            for (int j = 1; j <= n; ++j) c.samples.emplace_back(root, (hi - lo) * j / n);
        }
        return;
    }
    for (int k = 0; k < n; ++k) {
        const double b = lo + (hi - lo) * k / (n - 1);
        const double d = p1(b);
        if (d == 0) continue;
        const double s = -p0(b) / d;
        if (s > 0) c.samples.emplace_back(b, std::sqrt(s));
    }
}

namespace detail {

/// Trichotomy on a truncated class (e0, e1, e2) with ch3 free: true when
/// some value of ch3 passes.
template <Scalar T>
bool truncated_admissible(const BasicChern<T>& z, const T& alpha, double tol) {
    const int s1 = sign_of(z.e1, tol);
    if (s1 != 0) return s1 > 0;
    return sign_of(T(z.e2 - alpha * alpha / 6 * z.e0), tol) >= 0;
}

template <Scalar T>
bool destabilizes(const BasicChern<T>& v, const BasicChern<T>& w, const T& alpha, const T& beta, double tol) {
    const BasicChern<T> zv = twist(v, beta), zw = twist(w, beta);
    if (sign_of(zw.e1, tol) <= 0 || sign_of(T(zw.e1 - zv.e1), tol) > 0) return false;
    // nu(w) > nu(v) with both denominators positive.
    const T a2 = alpha * alpha;
    const T lhs = (zw.e2 - a2 / 2 * zw.e0) * zv.e1;
    const T rhs = (zv.e2 - a2 / 2 * zv.e0) * zw.e1;
    if (sign_of(T(lhs - rhs), tol) <= 0) return false;
    if (sign_of(delta_bar(w), tol) < 0) return false;
    const BasicChern<T> q = v - w;
    if (sign_of(delta_bar(q), tol) < 0) return false;
    return truncated_admissible(zw, alpha, tol) && truncated_admissible(twist(q, beta), alpha, tol);
}

}  // namespace detail

/// Candidate tilt-destabilizing subclasses w of v: integer (e0, e1, 2 e2) in
/// [-N, N]^3 with 0 < ch1^beta(w) <= ch1^beta(v), nu(w) > nu(v), Delta(w) >= 0,
/// Delta(v - w) >= 0, and both w and v - w admissible in Coh^beta. ch3 does not
/// enter these conditions; returned classes carry ch3 = 0. Sorted by lattice point.
template <Scalar T>
std::vector<ChernVector> destabilizer_search(const BasicChern<T>& v, const T& alpha, const T& beta, long box_bound,
                                             unsigned workers = 1, double tol = kDefaultTolerance) {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    if (trichotomy(v, alpha, beta, tol) != Trichotomy::PositiveCh1) {
        throw BadInput("destabilizer search needs ch1^beta > 0");
    }
    const long n = box_bound;
    const double bd = to_double(beta);
    const double top = to_double(twist(v, beta).e1);
    BasicChern<T> vt = v;
    vt.e3 = T(0);
    auto row = [&](std::size_t idx) {
        std::vector<ChernVector> found;
        const long n0 = static_cast<long>(idx) - n;
        const long lo1 = std::max(-n, static_cast<long>(std::floor(bd * n0)));
        const long hi1 = std::min(n, static_cast<long>(std::floor(bd * n0 + top)) + 1);
        for (long n1 = lo1; n1 <= hi1; ++n1) {
            for (long n2 = -n; n2 <= n; ++n2) {
                const ChernVector w{Rational(n0), Rational(n1), Rational(n2, 2), Rational(0)};
                if (detail::destabilizes(vt, w.template cast<T>(), alpha, beta, tol)) found.push_back(w);
            }
        }
        return found;
    };
    std::vector<ChernVector> out;
    for (auto& part : parallel_map<std::vector<ChernVector>>(static_cast<std::size_t>(2 * n + 1), workers, row)) {
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;  // rows are in increasing e0, entries in increasing (e1, e2)
}

enum class Order { Less, Equal, Greater };

std::string_view to_string(Order o);

/// rho^{a,b}_{alpha,beta} = -Re Z / Im Z; empty when Im Z = 0.
template <Scalar T>
std::optional<T> rho_value(const BasicChern<T>& v, const T& alpha, const T& beta, const T& a, const T& b) {
    const BasicChern<T> z = twist(v, beta);
    const T im = z.e2 - alpha * alpha / 2 * z.e0;
    if (im == 0) return std::nullopt;
    return (z.e3 - b * z.e2 - a * z.e1) / im;
}

/// Growth of rho as a -> +infinity: rho = slope * a + constant, or +-infinity
/// (inf_sign) when Im Z vanishes.
template <Scalar T>
struct RhoAsymptotic {
    int inf_sign = 0;
    T slope{};
    T constant{};
};

template <Scalar T>
RhoAsymptotic<T> rho_asymptotic(const BasicChern<T>& v, const T& alpha, const T& beta, const T& b, double tol) {
    const BasicChern<T> z = twist(v, beta);
    const T im = z.e2 - alpha * alpha / 2 * z.e0;
    RhoAsymptotic<T> r;
    if (!is_zero(im, tol)) {
        // slope = -ch1^beta / Im = -1 / (alpha nu)
        r.slope = -z.e1 / im;
        r.constant = (z.e3 - b * z.e2) / im;
        return r;
    }
    const int s1 = sign_of(z.e1, tol);
    r.inf_sign = s1 != 0 ? -s1 : sign_of(T(z.e3 - b * z.e2), tol);
    if (r.inf_sign == 0) throw ZeroCharge();
    return r;
}

/// Orders rho(v) against rho(w) for a -> +infinity.
template <Scalar T>
Order rho_compare(const BasicChern<T>& v, const BasicChern<T>& w, const T& alpha, const T& beta, const T& b,
                  double tol = kDefaultTolerance) {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    const RhoAsymptotic<T> x = rho_asymptotic(v, alpha, beta, b, tol);
    const RhoAsymptotic<T> y = rho_asymptotic(w, alpha, beta, b, tol);
    auto cmp = [](int s) { return s < 0 ? Order::Less : (s > 0 ? Order::Greater : Order::Equal); };
    if (x.inf_sign != 0 || y.inf_sign != 0) return cmp(x.inf_sign - y.inf_sign);
    if (const int s = sign_of(T(x.slope - y.slope), tol); s != 0) return cmp(s);
    return cmp(sign_of(T(x.constant - y.constant), tol));
}

}  // namespace bstab
