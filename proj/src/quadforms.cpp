#include "bstab/quadforms.hpp"

#include <algorithm>
#include <cmath>

namespace bstab {

std::string_view to_string(Definiteness d) {
    switch (d) {
        case Definiteness::NegDefinite: return "NegDefinite";
        case Definiteness::NegSemiDefinite: return "NegSemiDefinite";
        case Definiteness::Indefinite: return "Indefinite";
        case Definiteness::PosSemiDefinite: return "PosSemiDefinite";
    }
    return "?";
}

Definiteness classify_eigen(const Gram2<double>& g, double tol) {
    const double mean = (g[0][0] + g[1][1]) / 2;
    const double half_gap = std::hypot((g[0][0] - g[1][1]) / 2, g[0][1]);
    const double lo = mean - half_gap;
    const double hi = mean + half_gap;
    const double scale = std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    const int s_lo = std::abs(lo) <= tol * scale ? 0 : (lo > 0 ? 1 : -1);
    const int s_hi = std::abs(hi) <= tol * scale ? 0 : (hi > 0 ? 1 : -1);
    if (s_hi < 0) return Definiteness::NegDefinite;
    if (s_hi == 0 && s_lo <= 0) return Definiteness::NegSemiDefinite;
    if (s_lo >= 0) return Definiteness::PosSemiDefinite;
    return Definiteness::Indefinite;
}

namespace {

struct Pencil {
    // G(K) = p + K q on the kernel.
    Gram2<double> p{}, q{};

    Gram2<double> at(double k) const {
        Gram2<double> g;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) g[i][j] = p[i][j] + k * q[i][j];
        }
        return g;
    }

    bool negative_definite(double k) const {
        const Gram2<double> g = at(k);
        return g[0][0] < 0 && g[0][0] * g[1][1] - g[0][1] * g[1][0] > 0;
    }
};

void push_linear_root(std::vector<double>& roots, double c0, double c1) {
    if (c1 != 0) roots.push_back(-c0 / c1);
}

void push_quadratic_roots(std::vector<double>& roots, double a, double b, double c) {
    if (a == 0) {
        push_linear_root(roots, c, b);
        return;
    }
    const double disc = b * b - 4 * a * c;
    if (disc < 0) return;
    const double s = std::sqrt(disc);
    // Numerically stable pair.
    const double qv = -0.5 * (b + std::copysign(s, b));
    if (qv != 0) {
        roots.push_back(qv / a);
        roots.push_back(c / qv);
    } else {
        roots.push_back(0.0);
    }
}

/// Refines a boundary between a good point and a bad point.
double bisect(const Pencil& pencil, double good, double bad) {
    for (int it = 0; it < 200 && std::abs(good - bad) > 1e-15 * (1 + std::abs(good)); ++it) {
        const double mid = (good + bad) / 2;
        if (pencil.negative_definite(mid)) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    return (good + bad) / 2;
}

}  // namespace

SupportInterval support_interval(double alpha, double beta, double a, double b, double tol) {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    const ChargeSpec<double> spec = full_charge(alpha, beta, a, b);
    const auto basis = kernel_basis(spec);
    FormParams<double> none;
    const QuadForm<double> nabla = make_form(FormKind::NablaBar, beta, none);
    const QuadForm<double> delta = make_form(FormKind::DeltaBar, beta, none);
    Pencil pencil;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            pencil.p[i][j] = linalg::bilinear(nabla.gram, basis[i], basis[j]);
            pencil.q[i][j] = linalg::bilinear(delta.gram, basis[i], basis[j]);
        }
    }

    // Breakpoints: zeros of the diagonal entries and of the determinant.
    std::vector<double> roots;
    push_linear_root(roots, pencil.p[0][0], pencil.q[0][0]);
    push_linear_root(roots, pencil.p[1][1], pencil.q[1][1]);
    const double qa = pencil.q[0][0] * pencil.q[1][1] - pencil.q[0][1] * pencil.q[1][0];
    const double qb = pencil.p[0][0] * pencil.q[1][1] + pencil.p[1][1] * pencil.q[0][0] -
                      pencil.p[0][1] * pencil.q[1][0] - pencil.p[1][0] * pencil.q[0][1];
    const double qc = pencil.p[0][0] * pencil.p[1][1] - pencil.p[0][1] * pencil.p[1][0];
    push_quadratic_roots(roots, qa, qb, qc);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

    // Probe each open segment; the negative-definite set of an affine pencil is convex.
    SupportInterval out;
    const double far = 1.0 + (roots.empty() ? 0.0 : std::max(std::abs(roots.front()), std::abs(roots.back())));
    std::vector<double> probes;
    if (roots.empty()) {
        probes.push_back(0.0);
    } else {
        probes.push_back(roots.front() - far);
        for (size_t i = 0; i + 1 < roots.size(); ++i) probes.push_back((roots[i] + roots[i + 1]) / 2);
        probes.push_back(roots.back() + far);
    }
    int first = -1, last = -1;
    for (int i = 0; i < static_cast<int>(probes.size()); ++i) {
        if (pencil.negative_definite(probes[i])) {
            if (first < 0) first = i;
            last = i;
        }
    }
    if (first < 0) {
        // Closed-form breakpoints can miss a sliver when the determinant nearly
        // touches zero; fall back to a scan of the candidate region.
        double best = 0.0;
        bool found = false;
        const int steps = 4096;
        const double lo = roots.empty() ? -far : roots.front() - far;
        const double hi = roots.empty() ? far : roots.back() + far;
        for (int i = 0; i <= steps && !found; ++i) {
            const double k = lo + (hi - lo) * i / steps;
            if (pencil.negative_definite(k)) {
                best = k;
                found = true;
            }
        }
        if (!found) return out;
        out.empty = false;
        double left = best - far, right = best + far;
        out.k_min = pencil.negative_definite(left) ? std::optional<double>() : bisect(pencil, best, left);
        out.k_max = pencil.negative_definite(right) ? std::optional<double>() : bisect(pencil, best, right);
        return out;
    }
    out.empty = false;
    const bool unbounded_left = first == 0 && !roots.empty();
    const bool unbounded_right = last == static_cast<int>(probes.size()) - 1 && !roots.empty();
    if (roots.empty()) return out;  // negative definite for every K
    if (!unbounded_left) out.k_min = roots[first - 1];
    if (!unbounded_right) out.k_max = roots[last];
    // Polish endpoints that sit on ill-conditioned roots.
    const double inside = (out.k_min && out.k_max) ? (*out.k_min + *out.k_max) / 2 : probes[first];
    if (out.k_min && std::abs(qa) < tol) out.k_min = bisect(pencil, inside, *out.k_min - far);
    if (out.k_max && std::abs(qa) < tol) out.k_max = bisect(pencil, inside, *out.k_max + far);
    return out;
}

std::optional<double> find_epsilon(double delta, double alpha, double beta, double a, double b,
                                   std::optional<double> psi_bound) {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    const double psi = psi_bound.value_or(alpha * alpha / 6 + alpha * std::abs(b) / 2);
    if (!(delta > 0) || !(delta < a - psi)) return std::nullopt;
    const ChargeSpec<double> spec = full_charge(alpha, beta, a, b);
    FormParams<double> p;
    p.delta = delta;
    p.alpha = alpha;
    p.a = a;
    p.b = b;
    for (int k = 1; k <= 40; ++k) {
        p.epsilon = std::ldexp(1.0, -k);
        const auto r = kernel_restrict(make_form(FormKind::SDeltaEps, beta, p), spec);
        if (r.verdict == Definiteness::NegDefinite) return *p.epsilon;
    }
    return std::nullopt;
}

}  // namespace bstab
