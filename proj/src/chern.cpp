#include "bstab/chern.hpp"

#include <sstream>
#include <vector>

namespace bstab {

VarietyData VarietyData::generic(int degree) {
    if (degree < 1) throw std::invalid_argument("degree must be positive");
    VarietyData x;
    x.degree = degree;
    x.euler_enabled = false;
    return x;
}

ChernVector from_lattice(const LatticePoint& p) {
    return {Rational(p.n0), Rational(p.n1), Rational(p.n2, 2), Rational(p.n3, 6)};
}

namespace {

bool is_integer(const Rational& r) {
    return boost::multiprecision::denominator(r) == 1;
}

}  // namespace

bool is_lattice_point(const ChernVector& v) {
    return is_integer(v.e0) && is_integer(v.e1) && is_integer(v.e2 * 2) && is_integer(v.e3 * 6);
}

LatticePoint to_lattice(const ChernVector& v) {
    if (!is_lattice_point(v)) throw std::invalid_argument("class is not a P^3 lattice point");
    auto as_long = [](const Rational& r) { return boost::multiprecision::numerator(r).convert_to<long>(); };
    return {as_long(v.e0), as_long(v.e1), as_long(v.e2 * 2), as_long(v.e3 * 6)};
}

ChernVector parse_class(std::string_view text) {
    std::vector<Rational> parts;
    size_t start = 0;
    while (true) {
        size_t comma = text.find(',', start);
        parts.push_back(parse_rational(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (parts.size() != 4) throw ParseError("class needs four entries e0,e1,e2,e3");
    return {parts[0], parts[1], parts[2], parts[3]};
}

std::string format_class(const ChernVector& v) {
    return format_rational(v.e0) + "," + format_rational(v.e1) + "," + format_rational(v.e2) + "," +
           format_rational(v.e3);
}

std::ostream& operator<<(std::ostream& os, const ChernVector& v) {
    return os << "(" << format_class(v) << ")";
}

Rational euler(const ChernVector& v, const ChernVector& w, const VarietyData& x) {
    if (!x.euler_enabled || x.degree != 1) throw EulerUnavailable();
    // Degree-3 coefficient of ch(v)^dual * ch(w) * td as polynomials in H.
    const std::array<Rational, 4> a{v.e0, -v.e1, v.e2, -v.e3};
    const std::array<Rational, 4> b{w.e0, w.e1, w.e2, w.e3};
    Rational chi = 0;
    for (int i = 0; i <= 3; ++i) {
        for (int j = 0; i + j <= 3; ++j) {
            chi += a[i] * b[j] * x.todd[3 - i - j];
        }
    }
    return chi;
}

namespace classes {

ChernVector line_bundle(long d) {
    return tensor_line(ChernVector{Rational(1), Rational(0), Rational(0), Rational(0)}, d);
}

ChernVector skyscraper() {
    return {Rational(0), Rational(0), Rational(0), Rational(1)};
}

ChernVector ideal_point() {
    return {Rational(1), Rational(0), Rational(0), Rational(-1)};
}

}  // namespace classes

}  // namespace bstab
