#pragma once

#include <cmath>
#include <numbers>

#include "propfrac/errors.hpp"

namespace propfrac {

namespace detail {

// Lanczos approximation, g = 7, 9 coefficients.
// Relative error below 1e-13 for real arguments >= 0.5.
inline double lanczos_positive(double z) {
    static constexpr double coef[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    double acc = coef[0];
    for (int i = 1; i < 9; ++i)
        acc += coef[i] / (z + (double)(i - 1));
    double t = z + 6.5;  // z - 1 + g + 0.5
    return std::sqrt(2.0 * std::numbers::pi)
         * std::pow(t, z - 0.5) * std::exp(-t) * acc;
}

inline bool is_nonpositive_integer(double x) {
    return x <= 0.0 && std::floor(x) == x;
}

} // namespace detail

/// Gamma function for real arguments away from the poles.
inline double gamma_fn(double x) {
    if (detail::is_nonpositive_integer(x))
        throw domain_error("gamma pole at non-positive integer");
    if (x >= 0.5)
        return detail::lanczos_positive(x);
    // reflection: gamma(x) * gamma(1-x) = pi / sin(pi x)
    return std::numbers::pi
         / (std::sin(std::numbers::pi * x) * detail::lanczos_positive(1.0 - x));
}

/// 1/Gamma, extended to exactly 0 at the poles. Total on the reals.
inline double reciprocal_gamma(double x) {
    if (detail::is_nonpositive_integer(x)) return 0.0;
    return 1.0 / gamma_fn(x);
}

} // namespace propfrac
