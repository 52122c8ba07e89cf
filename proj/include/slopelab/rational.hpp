#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace slopelab {

/// Exact rational scalar used throughout the library. Always kept in
/// canonical form (reduced, positive denominator).
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Certifies an internal inconsistency between two independent computation
/// routes. Must be impossible on valid inputs.
struct identity_violation : std::logic_error {
    using std::logic_error::logic_error;
};

/// Parses a decimal integer or "p/q" string into a canonical rational.
inline Rational parse_rational(const std::string& text) {
    if (text.empty())
        throw validation_error("empty rational literal");
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos)
            return Rational(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0)
            throw validation_error("rational with zero denominator: " + text);
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw validation_error("malformed rational literal: " + text);
    }
}

inline std::string to_string(const Rational& r) { return r.str(); }

/// 17-significant-digit decimal rendering, for report approximations.
inline std::string decimal_string(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", r.convert_to<double>());
    return buf;
}

inline std::string decimal_string(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

} // namespace slopelab
