#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <concepts>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bstab {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

/// The two numeric backends: exact rationals and IEEE doubles.
template <class T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

/// Comparison tolerance used by the double backend.
inline constexpr double kDefaultTolerance = 1e-9;

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <Scalar T>
T from_rational(const Rational& r) {
    if constexpr (std::same_as<T, double>) {
        return r.template convert_to<double>();
    } else {
        return r;
    }
}

template <Scalar T>
double to_double(const T& x) {
    if constexpr (std::same_as<T, double>) {
        return x;
    } else {
        return x.template convert_to<double>();
    }
}

template <Scalar T>
bool is_exact() {
    return std::same_as<T, Rational>;
}

/// Zero test: exact for rationals, |x| <= tol for doubles.
template <Scalar T>
bool is_zero(const T& x, double tol = kDefaultTolerance) {
    if constexpr (std::same_as<T, double>) {
        return std::abs(x) <= tol;
    } else {
        return x == 0;
    }
}

template <Scalar T>
int sign_of(const T& x, double tol = kDefaultTolerance) {
    if (is_zero(x, tol)) return 0;
    return x > 0 ? 1 : -1;
}

template <Scalar T>
T abs_of(const T& x) {
    return x < 0 ? T(-x) : x;
}

Rational floor_of(const Rational& r);

/// Exact for rationals; for doubles, values within tol of an integer snap to it.
template <Scalar T>
long floor_to_long(const T& x, double tol = kDefaultTolerance) {
    if constexpr (std::same_as<T, double>) {
        const double r = std::round(x);
        return static_cast<long>(std::abs(x - r) <= tol ? r : std::floor(x));
    } else {
        return floor_of(x).template convert_to<long>();
    }
}

template <Scalar T>
long ceil_to_long(const T& x, double tol = kDefaultTolerance) {
    return -floor_to_long(T(-x), tol);
}

/// Exact conversion of a double (every finite double is a rational).
template <Scalar T>
T from_double(double x) {
    if constexpr (std::same_as<T, double>) {
        return x;
    } else {
        return Rational(x);
    }
}

/// Parses "p/q", integers, and plain decimals ("0.25", "-1.5e-3") exactly.
Rational parse_rational(std::string_view text);

struct ParsedReal {
    std::optional<Rational> exact;  ///< empty when the value is irrational
    double approx = 0.0;
};

/// Parses a real: anything parse_rational accepts, plus "sqrt(x)" with x rational.
ParsedReal parse_real(std::string_view text);

/// "p/q" in lowest terms, "p" for integers.
std::string format_rational(const Rational& r);

/// Shortest decimal that round-trips to the same double.
std::string format_real(double x);

}  // namespace bstab
