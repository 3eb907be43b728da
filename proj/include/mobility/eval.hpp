#ifndef MOBILITY_EVAL_HPP
#define MOBILITY_EVAL_HPP

#include <memory>

#include "mobility/core.hpp"
#include "mobility/hmm.hpp"
#include "mobility/markov.hpp"
#include "mobility/rnn.hpp"

namespace mobility {

struct EvalReport {
    double accuracy = 0.0;
    size_t predictions_made = 0;
    size_t warmup_skipped = 0;
    // cumulative accuracy sampled along the evaluation, (evaluated index,
    // accuracy so far); filled when online_evaluate is asked for a curve
    std::vector<std::pair<size_t, double>> curve;
};

// One-step-ahead predictor over a growing history. observe() is called for
// every symbol in order; predict() asks for the next one.
class Predictor {
public:
    virtual ~Predictor() = default;
    virtual void observe(Symbol s) = 0;
    virtual Symbol predict() = 0;
};

// Incremental order-k Markov predictor: counts are updated after every
// observed symbol, so each prediction uses exactly the data before it.
class MarkovPredictor : public Predictor {
public:
    explicit MarkovPredictor(size_t order);
    void observe(Symbol s) override;
    Symbol predict() override;

private:
    size_t order_;
    TransitionMatrix matrix_;
    FrequencyTable global_;
    std::vector<Symbol> history_;
};

// Frozen HMM: fitted elsewhere, filtered state advanced per symbol.
class HmmPredictor : public Predictor {
public:
    explicit HmmPredictor(HmmModel model);
    void observe(Symbol s) override;
    Symbol predict() override;

private:
    HmmModel model_;
    std::vector<double> filtered_;
    bool started_ = false;
};

// Frozen RNN: hidden state advanced per symbol.
class RnnPredictor : public Predictor {
public:
    explicit RnnPredictor(RnnModel model);
    void observe(Symbol s) override;
    Symbol predict() override;

private:
    RnnModel model_;
    RnnState state_;
};

// For each position i in [warmup, n): predict s[i] from s[0..i), then feed
// s[i] to the predictor. Accuracy over all evaluated positions. A positive
// curve_points asks for that many cumulative-accuracy samples.
EvalReport online_evaluate(const SymbolSequence& seq, Predictor& predictor, size_t warmup,
                           size_t curve_points = 0);

} // namespace mobility

#endif
