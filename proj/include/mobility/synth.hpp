#ifndef MOBILITY_SYNTH_HPP
#define MOBILITY_SYNTH_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "mobility/core.hpp"

namespace mobility {

// Row-stochastic transition matrix plus an initial distribution; the ground
// truth behind synthetic sequences with closed-form entropy rate and optimal
// prediction accuracy.
struct MarkovSpec {
    std::vector<std::vector<double>> M; // M[a][b] = P(next = b | current = a)
    std::vector<double> initial;
    uint64_t seed = 0;

    size_t states() const { return M.size(); }
    void validate() const;

    // random rows: uniform(0,1) entries normalized, then a stay-probability
    // boost on the diagonal; strictly positive, hence ergodic
    static MarkovSpec random_ergodic(size_t K, uint64_t seed, double stay = 0.0);
};

enum class ChainClass { ergodic, reducible, periodic };

SymbolSequence gen_markov(const MarkovSpec& spec, size_t n);

// -sum_a pi_a sum_b M(b|a) log2 M(b|a); pi via damped power iteration.
double markov_entropy_rate(const MarkovSpec& spec);

// sum_a pi_a max_b M(b|a): accuracy of the Bayes-optimal one-step predictor.
double markov_optimal_accuracy(const MarkovSpec& spec);

std::vector<double> stationary_distribution(const MarkovSpec& spec);

ChainClass classify_chain(const std::vector<std::vector<double>>& M);

// Binary substitution system: each symbol rewrites to an ordered pair for
// `depth` rounds; each produced child is replaced by a uniformly random
// symbol with probability epsilon. Output length is exactly 2^depth.
struct GrammarSpec {
    uint32_t alphabet;
    uint32_t depth;
    std::vector<std::pair<Symbol, Symbol>> rules; // rules[s] = (left, right)
    double epsilon = 0.0;
    uint64_t seed = 0;

    void validate() const;

    // rule table from two independent random permutations; keeps ancestor
    // information recoverable at every level
    static GrammarSpec random_rules(uint32_t alphabet, uint32_t depth, double epsilon,
                                    uint64_t seed);
    // doubling rules s -> (2s, 2s+1) mod alphabet; the noiseless fixed point
    // is periodic, so all predictive structure sits in one global phase
    static GrammarSpec doubling_rules(uint32_t alphabet, uint32_t depth, double epsilon,
                                      uint64_t seed);
};

SymbolSequence gen_grammar(const GrammarSpec& spec);

} // namespace mobility

#endif
