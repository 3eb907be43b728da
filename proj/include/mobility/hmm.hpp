#ifndef MOBILITY_HMM_HPP
#define MOBILITY_HMM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mobility/core.hpp"

namespace mobility {

// Discrete-emission hidden Markov model trained by Baum-Welch.
struct HmmModel {
    size_t K = 0; // hidden states
    size_t N = 0; // alphabet
    std::vector<double> initial;                  // K
    std::vector<std::vector<double>> transitions; // K x K, rows sum to 1
    std::vector<std::vector<double>> emissions;   // K x N, rows sum to 1
    std::vector<double> log_likelihood_trace;     // nats, one entry per EM iteration
};

struct HmmConfig {
    size_t states = 8;
    size_t iterations = 100;
    double tolerance = 1e-4; // nats
    size_t restarts = 5;
    uint64_t seed = 0;
};

// Seeded random initialization, scaled forward/backward passes, stops at the
// iteration cap or when the log-likelihood gain drops below tolerance. With
// several restarts the model with the best final likelihood wins.
HmmModel fit_hmm(const SymbolSequence& seq, const HmmConfig& cfg);

// Log-likelihood of a sequence under the model (nats).
double hmm_log_likelihood(const HmmModel& m, std::span<const Symbol> seq);

// Filtered state distribution after consuming the history.
std::vector<double> hmm_filter(const HmmModel& m, std::span<const Symbol> history);

// Forward recursion on the history, one step through the transitions,
// then the emission argmax (ties to the smaller id).
Symbol hmm_predict_next(const HmmModel& m, std::span<const Symbol> history);

} // namespace mobility

#endif
