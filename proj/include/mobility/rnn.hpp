#ifndef MOBILITY_RNN_HPP
#define MOBILITY_RNN_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mobility/core.hpp"

namespace mobility {

// Minimal recurrent network: one tanh hidden layer, softmax output.
//   h_t = tanh(Wxh[:, x_t] + Whh h_{t-1} + bh)
//   p_t = softmax(Why h_t + by)
// Stored row-major in flat vectors.
struct RnnModel {
    size_t H = 0;
    size_t N = 0;
    std::vector<double> Wxh; // H x N
    std::vector<double> Whh; // H x H
    std::vector<double> bh;  // H
    std::vector<double> Why; // N x H
    std::vector<double> by;  // N
    std::vector<double> epoch_loss; // mean cross-entropy (nats) per epoch

    static RnnModel init(size_t N, size_t H, uint64_t seed);
};

struct RnnConfig {
    size_t hidden = 64;
    double learning_rate = 0.1;
    size_t truncation = 32;
    size_t epochs = 20;
    uint64_t seed = 0;
    size_t restarts = 1; // best final training loss wins
};

// Truncated backpropagation through time with the gradient norm clipped at
// 5.0 and Adagrad step scaling; deterministic for a given seed.
RnnModel train_rnn(const SymbolSequence& seq, const RnnConfig& cfg);

// Mean cross-entropy (nats per symbol) of next-symbol predictions.
double rnn_mean_loss(const RnnModel& m, std::span<const Symbol> seq);

// Compares analytic gradients of every parameter against central finite
// differences (step 1e-5) on a short batch; returns the max relative error.
double rnn_gradient_check(const RnnModel& m, std::span<const Symbol> batch);

// Streaming hidden state for online evaluation.
struct RnnState {
    std::vector<double> h;

    explicit RnnState(const RnnModel& m) : h(m.H, 0.0) {}
    void advance(const RnnModel& m, Symbol x);
    Symbol predict(const RnnModel& m) const;
};

} // namespace mobility

#endif
