#include "gcx/scalar.hpp"

#include <cctype>

namespace gcx {

std::string to_string(Ring r) {
    switch (r) {
        case Ring::Z: return "Z";
        case Ring::Q: return "Q";
        case Ring::Z2: return "Z2";
    }
    return "?";
}

Ring ring_from_string(const std::string& s) {
    if (s == "Z") return Ring::Z;
    if (s == "Q") return Ring::Q;
    if (s == "Z2" || s == "Z/2") return Ring::Z2;
    throw std::invalid_argument("unknown ring '" + s + "'");
}

std::string to_decimal(const Integer& x) { return x.str(); }

std::string to_decimal(const Rational& x) {
    if (denominator(x) == 1) return numerator(x).str();
    return numerator(x).str() + "/" + denominator(x).str();
}

Integer parse_integer(const std::string& s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) throw std::invalid_argument("malformed integer '" + s + "'");
    for (std::size_t j = i; j < s.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(s[j])))
            throw std::invalid_argument("malformed integer '" + s + "'");
    return Integer(s);
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_integer(s));
    Integer num = parse_integer(s.substr(0, slash));
    Integer den = parse_integer(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rational(num) / Rational(den);
}

Rational normalize_coefficient(const Rational& x, Ring r) {
    switch (r) {
        case Ring::Q: return x;
        case Ring::Z:
            if (denominator(x) != 1) throw std::invalid_argument("non-integer coefficient over Z");
            return x;
        case Ring::Z2: {
            if (denominator(x) != 1) throw std::invalid_argument("non-integer coefficient over Z2");
            Integer n = numerator(x);
            return Rational(bit_test(abs(n), 0) ? 1 : 0);
        }
    }
    return x;
}

}  // namespace gcx
