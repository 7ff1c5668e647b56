#pragma once

#include <cmath>

namespace logitpath {

// Overflow-free for any finite z.
inline double logistic(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z))
inline double softplus(double z) {
    if (z > 0.0) {
        return z + std::log1p(std::exp(-z));
    }
    return std::log1p(std::exp(z));
}

// log(logistic(z))
inline double log_logistic(double z) { return -softplus(-z); }

inline double logit(double p) { return std::log(p) - std::log1p(-p); }

// log(exp(a) + exp(b))
inline double log_add(double a, double b) {
    if (a == -INFINITY) return b;
    if (b == -INFINITY) return a;
    return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

}  // namespace logitpath
