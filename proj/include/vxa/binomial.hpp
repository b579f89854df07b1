#pragma once

#include <vector>

#include "vxa/rational.hpp"

namespace vxa {

// Generalized binomial coefficient C(s, m) = s(s-1)...(s-m+1)/m! with
// rational upper argument.
inline Scalar rat_binomial(const Scalar& s, long m) {
    if (m < 0) throw std::invalid_argument("rat_binomial: negative m");
    Scalar result(1);
    for (long t = 0; t < m; ++t) {
        result *= (s - t);
        result /= (t + 1);
    }
    return result;
}

// Coefficients of (1+z)^s through z^order: entry j is C(s, j).
inline std::vector<Scalar> binomial_series(const Scalar& s, long order) {
    if (order < 0) throw std::invalid_argument("binomial_series: negative order");
    std::vector<Scalar> coeffs;
    coeffs.reserve(static_cast<std::size_t>(order) + 1);
    Scalar c(1);
    coeffs.push_back(c);
    for (long j = 1; j <= order; ++j) {
        c *= (s - (j - 1));
        c /= j;
        coeffs.push_back(c);
    }
    return coeffs;
}

}  // namespace vxa
