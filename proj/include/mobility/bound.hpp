#ifndef MOBILITY_BOUND_HPP
#define MOBILITY_BOUND_HPP

#include <cstdint>

namespace mobility {

// Solution of the limiting case of Fano's inequality for given entropy S and
// location count N: pi_max is the root of
//   F(pi) = H_b(pi) + (1 - pi) * log2(N - 1) = S  on [1/N, 1].
struct PredictabilityBound {
    double S;
    uint64_t N;
    double pi_max;
    double residual; // |F(pi_max) - S|
};

// -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0.
double binary_entropy(double p);

// F as above; strictly decreasing from log2 N to 0 on [1/N, 1].
double fano_forward(double pi, uint64_t N);

PredictabilityBound predictability_bound(double S, uint64_t N);

} // namespace mobility

#endif
