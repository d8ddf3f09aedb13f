#include "cohmms/rational.hpp"

#include <cmath>
#include <limits>

namespace cohmms {

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) {
        throw StructuralError("cannot convert non-finite value to rational");
    }
    // cpp_rational's double constructor performs the exact binary expansion.
    return Rational(x);
}

namespace {

BigInt parse_big_int(std::string_view s) {
    if (s.empty()) throw StructuralError("empty integer literal");
    try {
        return BigInt(std::string(s));
    } catch (const std::exception&) {
        throw StructuralError("invalid integer literal '" + std::string(s) + "'");
    }
}

Rational parse_decimal(std::string_view s) {
    // [-]digits[.digits]
    auto dot = s.find('.');
    if (dot == std::string_view::npos) return Rational(parse_big_int(s));
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (frac.empty()) return Rational(parse_big_int(whole));
    bool negative = !whole.empty() && whole.front() == '-';
    BigInt scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt head = parse_big_int(whole.empty() || whole == "-" ? std::string_view("0") : whole);
    BigInt tail = parse_big_int(frac);
    BigInt num = scalar_abs(head) * scale + tail;
    if (negative) num = -num;
    return Rational(num, scale);
}

} // namespace

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return parse_decimal(text);
    BigInt num = parse_big_int(text.substr(0, slash));
    BigInt den = parse_big_int(text.substr(slash + 1));
    if (den == 0) throw StructuralError("rational with zero denominator: '" + std::string(text) + "'");
    return Rational(num, den);
}

std::string rational_to_string(const Rational& q) {
    BigInt num = numerator(q);
    BigInt den = denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

} // namespace cohmms
