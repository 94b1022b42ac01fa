#include "bstab/scalar.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace bstab {

Rational floor_of(const Rational& r) {
    Integer num = boost::multiprecision::numerator(r);
    Integer den = boost::multiprecision::denominator(r);
    Integer q = num / den;  // truncates toward zero
    if (num < 0 && q * den != num) q -= 1;
    return Rational(q);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

/// Decimal digits to an Integer; a leading 0 would otherwise select octal.
Integer decimal_integer(std::string_view digits) {
    const auto first = digits.find_first_not_of('0');
    if (first == std::string_view::npos) return Integer(0);
    return Integer{std::string(digits.substr(first))};
}

Rational parse_integer(std::string_view s) {
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw ParseError("not an integer: '" + std::string(s) + "'");
    const Integer v = decimal_integer(s);
    return Rational(neg ? Integer(-v) : v);
}

Rational pow10(long e) {
    Integer p = 1;
    for (long i = 0; i < std::labs(e); ++i) p *= 10;
    return e >= 0 ? Rational(p) : Rational(1) / Rational(p);
}

Rational parse_decimal(std::string_view s) {
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_part = s.substr(e + 1);
        s = s.substr(0, e);
        Rational ev = parse_integer(exp_part);
        if (boost::multiprecision::denominator(ev) != 1 || abs_of(ev) > 4000) {
            throw ParseError("bad exponent");
        }
        exponent = boost::multiprecision::numerator(ev).convert_to<long>();
    }
    std::string digits;
    long frac_len = 0;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot);
        std::string_view fp = s.substr(dot + 1);
        if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
            (!fp.empty() && !all_digits(fp))) {
            throw ParseError("not a decimal: '" + std::string(s) + "'");
        }
        digits = std::string(ip) + std::string(fp);
        frac_len = static_cast<long>(fp.size());
    } else {
        if (!all_digits(s)) throw ParseError("not a number: '" + std::string(s) + "'");
        digits = std::string(s);
    }
    Rational v = Rational(decimal_integer(digits)) * pow10(exponent - frac_len);
    return neg ? Rational(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) throw ParseError("empty number");
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Rational p = parse_integer(trim(s.substr(0, slash)));
        Rational q = parse_integer(trim(s.substr(slash + 1)));
        if (q == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
        return p / q;
    }
    return parse_decimal(s);
}

ParsedReal parse_real(std::string_view text) {
    std::string_view s = trim(text);
    if (s.starts_with("sqrt(") && s.ends_with(")")) {
        Rational inner = parse_rational(s.substr(5, s.size() - 6));
        if (inner < 0) throw ParseError("sqrt of a negative number");
        // Perfect squares stay exact.
        Integer n = boost::multiprecision::numerator(inner);
        Integer d = boost::multiprecision::denominator(inner);
        Integer rn = boost::multiprecision::sqrt(n);
        Integer rd = boost::multiprecision::sqrt(d);
        if (rn * rn == n && rd * rd == d) {
            const Rational r(rn, rd);
            return {r, r.convert_to<double>()};
        }
        return {std::nullopt, std::sqrt(inner.convert_to<double>())};
    }
    const Rational r = parse_rational(s);
    return {r, r.convert_to<double>()};
}

std::string format_rational(const Rational& r) {
    Integer num = boost::multiprecision::numerator(r);
    Integer den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0) return "0";
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

}  // namespace bstab
