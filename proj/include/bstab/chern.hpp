#pragma once

#include "bstab/scalar.hpp"

#include <array>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bstab {

class EulerUnavailable : public std::runtime_error {
public:
    EulerUnavailable() : std::runtime_error("Euler pairing needs the P^3 lattice") {}
};

/// Polarized threefold data. Only the lattice normalization and the Todd
/// class are recorded; P^3 is the default.
struct VarietyData {
    int degree = 1;
    std::array<Rational, 4> todd{Rational(1), Rational(2), Rational(11, 6), Rational(1)};
    bool euler_enabled = true;

    static VarietyData p3() { return {}; }
    /// A threefold known only through H^3; Euler pairing disabled.
    static VarietyData generic(int degree);
};

/// A point of the lattice (H^3 ch0, H^2 ch1, H ch2, ch3).
template <Scalar T>
struct BasicChern {
    T e0{}, e1{}, e2{}, e3{};

    friend bool operator==(const BasicChern&, const BasicChern&) = default;

    BasicChern operator+(const BasicChern& o) const { return {e0 + o.e0, e1 + o.e1, e2 + o.e2, e3 + o.e3}; }
    BasicChern operator-(const BasicChern& o) const { return {e0 - o.e0, e1 - o.e1, e2 - o.e2, e3 - o.e3}; }
    BasicChern operator-() const { return {-e0, -e1, -e2, -e3}; }
    BasicChern operator*(const T& s) const { return {e0 * s, e1 * s, e2 * s, e3 * s}; }

    const T& operator[](int i) const { return i == 0 ? e0 : i == 1 ? e1 : i == 2 ? e2 : e3; }
    T& operator[](int i) { return i == 0 ? e0 : i == 1 ? e1 : i == 2 ? e2 : e3; }

    bool is_zero() const { return e0 == 0 && e1 == 0 && e2 == 0 && e3 == 0; }

    template <Scalar U>
    BasicChern<U> cast() const {
        if constexpr (std::same_as<T, U>) {
            return *this;
        } else if constexpr (std::same_as<U, double>) {
            return {to_double(e0), to_double(e1), to_double(e2), to_double(e3)};
        } else {
            return {Rational(e0), Rational(e1), Rational(e2), Rational(e3)};
        }
    }
};

using ChernVector = BasicChern<Rational>;

/// Integer coordinates (e0, e1, 2 e2, 6 e3) of a P^3 lattice point.
struct LatticePoint {
    long n0 = 0, n1 = 0, n2 = 0, n3 = 0;
    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

ChernVector from_lattice(const LatticePoint& p);

/// True when e0, e1, 2 e2, 6 e3 are all integers.
bool is_lattice_point(const ChernVector& v);

/// Clears denominators; throws std::invalid_argument off the lattice.
LatticePoint to_lattice(const ChernVector& v);

/// Parses "e0,e1,e2,e3" with rational entries such as "1,1,-1/2,1/6".
ChernVector parse_class(std::string_view text);
std::string format_class(const ChernVector& v);

std::ostream& operator<<(std::ostream& os, const ChernVector& v);

/// ch^beta = e^{-beta H} ch.
template <Scalar T>
BasicChern<T> twist(const BasicChern<T>& v, const T& beta) {
    const T b2 = beta * beta / 2;
    const T b3 = beta * beta * beta / 6;
    return {v.e0,
            v.e1 - beta * v.e0,
            v.e2 - beta * v.e1 + b2 * v.e0,
            v.e3 - beta * v.e2 + b2 * v.e1 - b3 * v.e0};
}

template <Scalar T>
BasicChern<T> dual(const BasicChern<T>& v) {
    return {v.e0, -v.e1, v.e2, -v.e3};
}

/// ch(E (x) O(cH)) = e^{cH} ch(E).
template <Scalar T>
BasicChern<T> tensor_line(const BasicChern<T>& v, long c) {
    return twist(v, T(-c));
}

/// Shift by n: multiplies the class by (-1)^n.
template <Scalar T>
BasicChern<T> shift(const BasicChern<T>& v, long n) {
    return (n % 2 == 0) ? v : -v;
}

/// Hirzebruch-Riemann-Roch pairing chi(v, w) on P^3.
Rational euler(const ChernVector& v, const ChernVector& w, const VarietyData& x = VarietyData::p3());

namespace classes {

ChernVector line_bundle(long d);
ChernVector skyscraper();
/// Ideal sheaf of a point.
ChernVector ideal_point();

}  // namespace classes

}  // namespace bstab
