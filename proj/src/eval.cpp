#include "mobility/eval.hpp"

#include <algorithm>

namespace mobility {

MarkovPredictor::MarkovPredictor(size_t order) : order_(order), matrix_(order) {
    if (order < 1 || order > 5) throw data_error("MarkovPredictor: order must be in 1..5");
}

void MarkovPredictor::observe(Symbol s) {
    history_.push_back(s);
    global_.add(s);
    matrix_.observe(history_);
}

Symbol MarkovPredictor::predict() {
    const size_t k = std::min(order_, history_.size());
    return markov_predict(
        matrix_, std::span<const Symbol>(history_.data() + history_.size() - k, k), global_);
}

HmmPredictor::HmmPredictor(HmmModel model) : model_(std::move(model)) {}

void HmmPredictor::observe(Symbol s) {
    if (s >= model_.N) throw data_error("hmm: symbol outside alphabet");
    // one incremental step of the scaled forward recursion
    std::vector<double> next(model_.K, 0.0);
    double norm = 0.0;
    for (size_t j = 0; j < model_.K; ++j) {
        double a;
        if (!started_) {
            a = model_.initial[j];
        } else {
            a = 0.0;
            for (size_t i = 0; i < model_.K; ++i)
                a += filtered_[i] * model_.transitions[i][j];
        }
        a *= model_.emissions[j][s];
        next[j] = a;
        norm += a;
    }
    if (!(norm > 0.0)) throw numeric_error("hmm: filter underflow");
    for (double& v : next) v /= norm;
    filtered_ = std::move(next);
    started_ = true;
}

Symbol HmmPredictor::predict() {
    if (!started_) return 0;
    std::vector<double> predicted(model_.K, 0.0);
    for (size_t i = 0; i < model_.K; ++i)
        for (size_t j = 0; j < model_.K; ++j)
            predicted[j] += filtered_[i] * model_.transitions[i][j];
    Symbol best = 0;
    double best_p = -1.0;
    for (Symbol v = 0; v < model_.N; ++v) {
        double p = 0.0;
        for (size_t j = 0; j < model_.K; ++j) p += predicted[j] * model_.emissions[j][v];
        if (p > best_p) {
            best_p = p;
            best = v;
        }
    }
    return best;
}

RnnPredictor::RnnPredictor(RnnModel model) : model_(std::move(model)), state_(model_) {}

void RnnPredictor::observe(Symbol s) { state_.advance(model_, s); }

Symbol RnnPredictor::predict() { return state_.predict(model_); }

EvalReport online_evaluate(const SymbolSequence& seq, Predictor& predictor, size_t warmup,
                           size_t curve_points) {
    const size_t n = seq.size();
    if (warmup >= n) throw data_error("online_evaluate: warmup must be < sequence length");
    EvalReport report;
    const size_t evaluated = n - warmup;
    const size_t stride =
        curve_points > 0 ? std::max<size_t>(1, evaluated / curve_points) : 0;
    size_t correct = 0;
    for (size_t i = 0; i < n; ++i) {
        if (i >= warmup) {
            if (predictor.predict() == seq.symbols[i]) ++correct;
            const size_t done = i - warmup + 1;
            if (stride > 0 && (done % stride == 0 || i + 1 == n))
                report.curve.emplace_back(
                    done, static_cast<double>(correct) / static_cast<double>(done));
        }
        predictor.observe(seq.symbols[i]);
    }
    report.predictions_made = evaluated;
    report.warmup_skipped = warmup;
    report.accuracy = static_cast<double>(correct) / static_cast<double>(evaluated);
    return report;
}

} // namespace mobility
