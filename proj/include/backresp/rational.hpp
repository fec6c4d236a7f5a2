#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace backresp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string fraction_string(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// Rounded to `digits` decimals, half away from zero.
std::string decimal_string(const Rational& r, unsigned digits = 6);

Rational parse_fraction(const std::string& text);  // "a" or "a/b"; throws InputError

}  // namespace backresp
