#ifndef MOBILITY_ENTROPY_HPP
#define MOBILITY_ENTROPY_HPP

#include <vector>

#include "mobility/core.hpp"

namespace mobility {

// Per-index lambda vector of the Lempel-Ziv-style parse. lambdas[i] is the
// length of the shortest substring starting at i (1-based index i+1) that
// does not occur as a contiguous substring of the prefix before it; 0 once
// every available substring has occurred before.
struct LambdaParse {
    std::vector<uint32_t> lambdas;
    size_t n = 0;
};

enum class LzMode {
    paper,        // shortest-unseen convention with the zero tail
    kontoyiannis, // longest-match + 1, capped at the remaining length
};

enum class EntropyEstimator { plugin, grassberger };

double digamma(double x);

// Maximum-likelihood (plug-in) entropy in bits: -sum (c/N) log2 (c/N).
double entropy_plugin(const Histogram& h);

// Grassberger-adjusted entropy in bits: (ln N - (1/N) sum N_i psi(N_i)) / ln 2.
double entropy_grassberger(const Histogram& h);

double entropy(const Histogram& h, EntropyEstimator est);

Histogram histogram_of(const SymbolSequence& seq);

LambdaParse lz_parse(const SymbolSequence& seq);

// Entropy rate estimate in bits per symbol: log2(n) / mean(lambda).
double entropy_lz(const SymbolSequence& seq, LzMode mode);

// Entropy of the empirical distribution over all overlapping windows of
// length T, treated as opaque symbols.
double block_entropy(const SymbolSequence& seq, size_t T, EntropyEstimator est);

// I_pred(T) = 2 S(T) - S(2T), same estimator for both terms.
double predictive_information(const SymbolSequence& seq, size_t T,
                              EntropyEstimator est = EntropyEstimator::plugin);

} // namespace mobility

#endif
