#include "backresp/rational.hpp"

#include "backresp/errors.hpp"

namespace backresp {

std::string decimal_string(const Rational& r, unsigned digits) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    bool negative = num < 0;
    if (negative) num = -num;
    BigInt scale = 1;
    for (unsigned i = 0; i < digits; ++i) scale *= 10;
    BigInt scaled = (num * scale * 2 + den) / (den * 2);
    std::string body = scaled.str();
    if (body.size() <= digits) body.insert(0, digits + 1 - body.size(), '0');
    std::string out = body.substr(0, body.size() - digits);
    if (digits > 0) out += "." + body.substr(body.size() - digits);
    return (negative && scaled != 0 ? "-" : "") + out;
}

Rational parse_fraction(const std::string& text) {
    try {
        auto slash = text.find('/');
        if (slash == std::string::npos) return Rational(BigInt(text));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw InputError("zero denominator in '" + text + "'");
        return Rational(BigInt(text.substr(0, slash)), den);
    } catch (const std::runtime_error&) {
        throw InputError("not a fraction: '" + text + "'");
    }
}

}  // namespace backresp
