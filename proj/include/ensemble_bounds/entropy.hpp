#pragma once

#include <cmath>
#include <string>

#include "ensemble_bounds/errors.hpp"

namespace ensemble_bounds {

/// Binary entropy in bits: H2(c) = -c*log2(c) - (1-c)*log2(1-c).
///
/// Endpoints return exactly 0 (convention 0*log 0 = 0). Evaluated as the sum
/// of the two terms directly; forming log2(c/(1-c)) first loses digits near
/// c = 1.
inline double binary_entropy(double c) {
    if (!(c >= 0.0 && c <= 1.0)) {
        throw DomainError("binary_entropy: argument " + std::to_string(c) +
                          " outside [0, 1]");
    }
    if (c == 0.0 || c == 1.0) return 0.0;
    return -c * std::log2(c) - (1.0 - c) * std::log2(1.0 - c);
}

/// Inverse of binary_entropy restricted to the decreasing branch [0.5, 1].
/// Returns the unique c in [0.5, 1] with H2(c) = h, found by bisection to an
/// absolute tolerance of 1e-12 on c.
inline double inverse_binary_entropy_upper(double h) {
    if (!(h >= 0.0 && h <= 1.0)) {
        throw DomainError("inverse_binary_entropy_upper: argument " +
                          std::to_string(h) + " outside [0, 1]");
    }
    if (h == 1.0) return 0.5;
    if (h == 0.0) return 1.0;
    double lo = 0.5;  // H2(lo) = 1 >= h
    double hi = 1.0;  // H2(hi) = 0 <= h
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (binary_entropy(mid) >= h) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Log-odds in natural log; the voting weight of a confidence.
inline double logit(double c) { return std::log(c / (1.0 - c)); }

/// Inverse of logit, stable for any finite argument.
inline double logistic(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace ensemble_bounds
