#ifndef GFALIGN_RATIONAL_HPP
#define GFALIGN_RATIONAL_HPP

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "gfalign/error.hpp"

namespace gfalign {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den) { return Rational(BigInt(num), BigInt(den)); }

inline Rational make_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

// "4/3", or "2" for integers.
inline std::string rational_string(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s.c_str()));
        return Rational(BigInt(s.substr(0, slash).c_str()), BigInt(s.substr(slash + 1).c_str()));
    } catch (const std::exception&) {
        throw Error(Errc::ParseError, "bad rational '" + s + "'");
    }
}

inline BigInt ipow(unsigned long long base, unsigned e) {
    BigInt r = 1;
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

inline double rational_to_double(const Rational& r) { return r.convert_to<double>(); }

} // namespace gfalign

#endif // GFALIGN_RATIONAL_HPP
