#pragma once

#include "bstab/chern.hpp"

#include <compare>
#include <optional>
#include <string_view>

namespace bstab {

/// A slope value, or +infinity when the defining denominator vanishes.
template <Scalar T>
struct ExtendedSlope {
    std::optional<T> value;  // empty means +infinity

    static ExtendedSlope infinity() { return {}; }
    static ExtendedSlope finite(T v) { return {std::move(v)}; }

    bool is_infinite() const { return !value.has_value(); }

    friend bool operator==(const ExtendedSlope& a, const ExtendedSlope& b) { return a.value == b.value; }
    friend std::partial_ordering operator<=>(const ExtendedSlope& a, const ExtendedSlope& b) {
        if (a.is_infinite() && b.is_infinite()) return std::partial_ordering::equivalent;
        if (a.is_infinite()) return std::partial_ordering::greater;
        if (b.is_infinite()) return std::partial_ordering::less;
        if (*a.value < *b.value) return std::partial_ordering::less;
        if (*a.value > *b.value) return std::partial_ordering::greater;
        return std::partial_ordering::equivalent;
    }
};

/// mu_beta = H^2 ch1^beta / H^3 ch0.
template <Scalar T>
ExtendedSlope<T> mu(const BasicChern<T>& v, const T& beta) {
    if (v.e0 == 0) return ExtendedSlope<T>::infinity();
    return ExtendedSlope<T>::finite((v.e1 - beta * v.e0) / v.e0);
}

/// Tilt slope nu_{alpha,beta} with one factor of alpha cancelled:
/// (ch2^beta - alpha^2/2 ch0) / (alpha ch1^beta).
template <Scalar T>
ExtendedSlope<T> nu(const BasicChern<T>& v, const T& alpha, const T& beta) {
    const BasicChern<T> t = twist(v, beta);
    if (t.e1 == 0) return ExtendedSlope<T>::infinity();
    return ExtendedSlope<T>::finite((t.e2 - alpha * alpha / 2 * t.e0) / (alpha * t.e1));
}

/// Numerator of nu: ch2^beta - alpha^2/2 ch0 (the imaginary part of Z^{a,b}).
template <Scalar T>
T nu_numerator(const BasicChern<T>& v, const T& alpha, const T& beta) {
    const BasicChern<T> t = twist(v, beta);
    return t.e2 - alpha * alpha / 2 * t.e0;
}

enum class Trichotomy { PositiveCh1, Ch1ZeroImPositive, Ch1ZeroImZeroReNeg, Violates };

std::string_view to_string(Trichotomy t);

/// Necessary condition for v to be the class of a nonzero object of Coh^beta,
/// with Z the tilt charge at (alpha, beta). Not sufficient.
template <Scalar T>
Trichotomy trichotomy(const BasicChern<T>& v, const T& alpha, const T& beta, double tol = kDefaultTolerance) {
    const BasicChern<T> t = twist(v, beta);
    const int s1 = sign_of(t.e1, tol);
    if (s1 > 0) return Trichotomy::PositiveCh1;
    if (s1 < 0) return Trichotomy::Violates;
    const T im = alpha * (t.e2 - alpha * alpha / 6 * t.e0);
    const int si = sign_of(im, tol);
    if (si > 0) return Trichotomy::Ch1ZeroImPositive;
    if (si < 0) return Trichotomy::Violates;
    const T re = -t.e3 + alpha * alpha / 2 * t.e1;
    return sign_of(T(-re), tol) > 0 ? Trichotomy::Ch1ZeroImZeroReNeg : Trichotomy::Violates;
}

}  // namespace bstab
