#pragma once

#include "bstab/chern.hpp"

#include <random>

namespace testing {

using bstab::ChernVector;
using bstab::Rational;

/// Deterministic source of small rationals and classes.
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

    Rational rational(long num = 20, long den = 12) {
        return Rational(integer(-num, num), integer(1, den));
    }
    Rational positive(long num = 20, long den = 12) { return Rational(integer(1, num), integer(1, den)); }

    ChernVector cls() { return {rational(), rational(), rational(), rational()}; }

    /// A lattice point of P^3 with coordinates in [-n, n].
    ChernVector lattice(long n) {
        return {Rational(integer(-n, n)), Rational(integer(-n, n)), Rational(integer(-n, n), 2),
                Rational(integer(-n, n), 6)};
    }
};

/// e^{xH} truncated at H^3, i.e. (1, x, x^2/2, x^3/6).
inline ChernVector exp_h(const Rational& x) { return {Rational(1), x, x * x / 2, x * x * x / 6}; }

/// Product of two truncated power series in H.
inline ChernVector series_mul(const ChernVector& p, const ChernVector& q) {
    ChernVector r;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; i + j < 4; ++j) r[i + j] += p[i] * q[j];
    }
    return r;
}

/// Binomial (n + 3 choose 3) as a polynomial in n, valid for every integer n.
inline Rational binom3(long n) { return Rational((n + 3) * (n + 2) * (n + 1), 6); }

}  // namespace testing
