#pragma once

#include <cmath>

namespace stats {

// |k/T - p| < 4 sigma with sigma = sqrt(p (1 - p) / T); exact match when p is 0 or 1.
inline bool within_4_sigma(long k, long trials, double p) {
    const double p_hat = static_cast<double>(k) / static_cast<double>(trials);
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    if (sigma == 0.0) return p_hat == p;
    return std::fabs(p_hat - p) < 4.0 * sigma;
}

// Two independent frequencies agree within 4 pooled sigmas.
inline bool agree_4_sigma(long k1, long t1, long k2, long t2) {
    const double p1 = static_cast<double>(k1) / t1, p2 = static_cast<double>(k2) / t2;
    const double p = static_cast<double>(k1 + k2) / (t1 + t2);
    const double sigma = std::sqrt(p * (1.0 - p) * (1.0 / t1 + 1.0 / t2));
    if (sigma == 0.0) return p1 == p2;
    return std::fabs(p1 - p2) < 4.0 * sigma;
}

}  // namespace stats
