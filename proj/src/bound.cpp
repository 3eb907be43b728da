#include "mobility/bound.hpp"

#include <cmath>

#include "mobility/core.hpp"

namespace mobility {

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) throw data_error("binary_entropy: p outside [0, 1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double fano_forward(double pi, uint64_t N) {
    return binary_entropy(pi) + (1.0 - pi) * std::log2(static_cast<double>(N - 1));
}

PredictabilityBound predictability_bound(double S, uint64_t N) {
    if (N < 2) throw data_error("predictability_bound: need N >= 2");
    if (S < 0.0) throw data_error("predictability_bound: negative entropy");
    const double s_max = std::log2(static_cast<double>(N));
    if (S > s_max) {
        if (S <= s_max + 1e-6)
            S = s_max; // absorb estimator rounding
        else
            throw numeric_error("predictability_bound: entropy exceeds random entropy");
    }

    // exact endpoints; F(1/N) = log2 N and F(1) = 0 algebraically
    if (S == 0.0) return {S, N, 1.0, 0.0};
    if (S == s_max) return {S, N, 1.0 / static_cast<double>(N), 0.0};

    double lo = 1.0 / static_cast<double>(N);
    double hi = 1.0 - 1e-12;
    // the sub-1/N branch of F is non-monotone and excluded; on [lo, hi] F is
    // strictly decreasing, so plain bisection converges
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (fano_forward(mid, N) > S)
            lo = mid;
        else
            hi = mid;
    }
    const double pi = 0.5 * (lo + hi);
    return {S, N, pi, std::fabs(fano_forward(pi, N) - S)};
}

} // namespace mobility
