#include "mobility/hmm.hpp"

#include <algorithm>
#include <cmath>

#include "mobility/rng.hpp"

namespace mobility {

namespace {

constexpr double kFloor = 1e-12;

std::vector<double> random_stochastic_row(size_t n, Rng& rng) {
    std::vector<double> row(n);
    double sum = 0.0;
    for (double& v : row) {
        v = rng.next_double() + 0.05;
        sum += v;
    }
    for (double& v : row) v /= sum;
    return row;
}

void floor_and_renormalize(std::vector<double>& row) {
    double sum = 0.0;
    for (double& v : row) {
        if (v < kFloor) v = kFloor;
        sum += v;
    }
    for (double& v : row) v /= sum;
}

struct ForwardResult {
    std::vector<std::vector<double>> alpha; // scaled, T x K
    std::vector<double> scale;              // per-step normalizers, positive
    double log_likelihood;                  // nats
};

ForwardResult forward_scaled(const HmmModel& m, std::span<const Symbol> seq) {
    const size_t T = seq.size(), K = m.K;
    ForwardResult fr;
    fr.alpha.assign(T, std::vector<double>(K, 0.0));
    fr.scale.assign(T, 0.0);
    fr.log_likelihood = 0.0;
    for (size_t t = 0; t < T; ++t) {
        if (seq[t] >= m.N) throw data_error("hmm: symbol outside alphabet");
        double norm = 0.0;
        for (size_t j = 0; j < K; ++j) {
            double a;
            if (t == 0) {
                a = m.initial[j];
            } else {
                a = 0.0;
                for (size_t i = 0; i < K; ++i) a += fr.alpha[t - 1][i] * m.transitions[i][j];
            }
            a *= m.emissions[j][seq[t]];
            fr.alpha[t][j] = a;
            norm += a;
        }
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw numeric_error("hmm: forward pass underflow");
        for (size_t j = 0; j < K; ++j) fr.alpha[t][j] /= norm;
        fr.scale[t] = norm;
        fr.log_likelihood += std::log(norm);
    }
    return fr;
}

HmmModel run_em(const SymbolSequence& seq, size_t K, size_t iterations, double tolerance,
                uint64_t seed) {
    const size_t T = seq.size();
    const size_t N = seq.alphabet_size;
    Rng rng(seed);

    HmmModel m;
    m.K = K;
    m.N = N;
    m.initial = random_stochastic_row(K, rng);
    m.transitions.resize(K);
    m.emissions.resize(K);
    for (size_t i = 0; i < K; ++i) {
        m.transitions[i] = random_stochastic_row(K, rng);
        m.emissions[i] = random_stochastic_row(N, rng);
    }

    std::vector<std::vector<double>> beta(T, std::vector<double>(K, 0.0));
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (size_t iter = 0; iter < iterations; ++iter) {
        const auto fr = forward_scaled(m, seq.symbols);

        // backward, scaled by the same per-step normalizers
        for (size_t j = 0; j < K; ++j) beta[T - 1][j] = 1.0;
        for (size_t t = T - 1; t-- > 0;) {
            for (size_t i = 0; i < K; ++i) {
                double b = 0.0;
                for (size_t j = 0; j < K; ++j)
                    b += m.transitions[i][j] * m.emissions[j][seq.symbols[t + 1]] *
                         beta[t + 1][j];
                beta[t][i] = b / fr.scale[t + 1];
            }
        }

        std::vector<double> new_initial(K, 0.0);
        std::vector<std::vector<double>> trans_num(K, std::vector<double>(K, 0.0));
        std::vector<double> trans_den(K, 0.0);
        std::vector<std::vector<double>> emit_num(K, std::vector<double>(N, 0.0));
        std::vector<double> emit_den(K, 0.0);

        for (size_t t = 0; t < T; ++t) {
            double gsum = 0.0;
            for (size_t i = 0; i < K; ++i) gsum += fr.alpha[t][i] * beta[t][i];
            for (size_t i = 0; i < K; ++i) {
                const double gamma = fr.alpha[t][i] * beta[t][i] / gsum;
                if (t == 0) new_initial[i] = gamma;
                emit_num[i][seq.symbols[t]] += gamma;
                emit_den[i] += gamma;
                if (t + 1 < T) trans_den[i] += gamma;
            }
            if (t + 1 < T) {
                for (size_t i = 0; i < K; ++i)
                    for (size_t j = 0; j < K; ++j)
                        trans_num[i][j] += fr.alpha[t][i] * m.transitions[i][j] *
                                           m.emissions[j][seq.symbols[t + 1]] *
                                           beta[t + 1][j] / fr.scale[t + 1];
            }
        }

        m.initial = new_initial;
        floor_and_renormalize(m.initial);
        for (size_t i = 0; i < K; ++i) {
            for (size_t j = 0; j < K; ++j)
                m.transitions[i][j] = trans_den[i] > 0.0 ? trans_num[i][j] / trans_den[i]
                                                         : 1.0 / static_cast<double>(K);
            floor_and_renormalize(m.transitions[i]);
            for (size_t v = 0; v < N; ++v)
                m.emissions[i][v] = emit_den[i] > 0.0 ? emit_num[i][v] / emit_den[i]
                                                      : 1.0 / static_cast<double>(N);
            floor_and_renormalize(m.emissions[i]);
        }

        m.log_likelihood_trace.push_back(fr.log_likelihood);
        if (iter > 0 && fr.log_likelihood - prev_ll < tolerance) break;
        prev_ll = fr.log_likelihood;
    }
    return m;
}

} // namespace

HmmModel fit_hmm(const SymbolSequence& seq, const HmmConfig& cfg) {
    if (cfg.states < 1) throw data_error("fit_hmm: need at least one state");
    if (seq.size() < 2) throw data_error("fit_hmm: need at least 2 symbols");
    if (seq.alphabet_size == 0) throw data_error("fit_hmm: empty alphabet");

    HmmModel best;
    double best_ll = -std::numeric_limits<double>::infinity();
    const size_t restarts = std::max<size_t>(1, cfg.restarts);
    for (size_t r = 0; r < restarts; ++r) {
        HmmModel m = run_em(seq, cfg.states, cfg.iterations, cfg.tolerance,
                            cfg.seed + 0x9E3779B9ULL * r);
        const double ll = m.log_likelihood_trace.back();
        if (ll > best_ll) {
            best_ll = ll;
            best = std::move(m);
        }
    }
    return best;
}

double hmm_log_likelihood(const HmmModel& m, std::span<const Symbol> seq) {
    return forward_scaled(m, seq).log_likelihood;
}

std::vector<double> hmm_filter(const HmmModel& m, std::span<const Symbol> history) {
    if (history.empty()) throw data_error("hmm_filter: empty history");
    const auto fr = forward_scaled(m, history);
    return fr.alpha.back();
}

Symbol hmm_predict_next(const HmmModel& m, std::span<const Symbol> history) {
    const auto filtered = hmm_filter(m, history);
    // one step through the chain, then the output distribution
    std::vector<double> predicted(m.K, 0.0);
    for (size_t i = 0; i < m.K; ++i)
        for (size_t j = 0; j < m.K; ++j) predicted[j] += filtered[i] * m.transitions[i][j];
    Symbol best = 0;
    double best_p = -1.0;
    for (Symbol v = 0; v < m.N; ++v) {
        double p = 0.0;
        for (size_t j = 0; j < m.K; ++j) p += predicted[j] * m.emissions[j][v];
        if (p > best_p) {
            best_p = p;
            best = v;
        }
    }
    return best;
}

} // namespace mobility
