#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vxa {

// Exact rational scalar. GMP keeps values canonical (lowest terms, positive
// denominator); every operation below preserves that.
using Scalar = mpq_class;

inline Scalar make_scalar(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("scalar: zero denominator");
    Scalar s(num, den);
    s.canonicalize();
    return s;
}

// Parses "p", "-p", "p/q". Used for CLI values (central charge, weights).
inline Scalar parse_scalar(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Scalar(mpz_class{text});
        }
        mpz_class num(text.substr(0, slash));
        mpz_class den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        Scalar s(num, den);
        s.canonicalize();
        return s;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("scalar: cannot parse '" + text + "'");
    }
}

inline std::string scalar_str(const Scalar& s) {
    if (s.get_den() == 1) return s.get_num().get_str();
    return s.get_num().get_str() + "/" + s.get_den().get_str();
}

inline bool is_integer(const Scalar& s) { return s.get_den() == 1; }

// True when s is an integer with the given parity sign relevance; (-1)^s for
// integer s.
inline int int_sign_pow(long exponent) { return (exponent % 2 == 0) ? 1 : -1; }

struct ScalarHash {
    std::size_t operator()(const Scalar& s) const {
        return std::hash<std::string>()(s.get_str());
    }
};

}  // namespace vxa
