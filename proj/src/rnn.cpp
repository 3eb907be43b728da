#include "mobility/rnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mobility/rng.hpp"

namespace mobility {

namespace {

void softmax(std::vector<double>& z) {
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& v : z) {
        v = std::exp(v - zmax);
        sum += v;
    }
    for (double& v : z) v /= sum;
}

struct Grads {
    std::vector<double> Wxh, Whh, bh, Why, by;

    explicit Grads(const RnnModel& m)
        : Wxh(m.Wxh.size(), 0.0),
          Whh(m.Whh.size(), 0.0),
          bh(m.bh.size(), 0.0),
          Why(m.Why.size(), 0.0),
          by(m.by.size(), 0.0) {}

    double squared_norm() const {
        double s = 0.0;
        for (const auto* v : {&Wxh, &Whh, &bh, &Why, &by})
            for (double g : *v) s += g * g;
        return s;
    }
};

// forward + backward over one chunk; returns summed cross-entropy (nats).
// h_in is advanced to the state after the chunk.
double chunk_loss_and_grads(const RnnModel& m, std::span<const Symbol> inputs,
                            std::span<const Symbol> targets, std::vector<double>& h_in,
                            Grads* grads) {
    const size_t T = inputs.size(), H = m.H, N = m.N;
    std::vector<std::vector<double>> hs(T + 1, std::vector<double>(H));
    hs[0] = h_in;
    std::vector<std::vector<double>> ps(T, std::vector<double>(N));
    double loss = 0.0;
    for (size_t t = 0; t < T; ++t) {
        const Symbol x = inputs[t];
        for (size_t i = 0; i < H; ++i) {
            double a = m.Wxh[i * N + x] + m.bh[i];
            const double* wrow = &m.Whh[i * H];
            for (size_t j = 0; j < H; ++j) a += wrow[j] * hs[t][j];
            hs[t + 1][i] = std::tanh(a);
        }
        for (size_t v = 0; v < N; ++v) {
            double z = m.by[v];
            const double* wrow = &m.Why[v * H];
            for (size_t i = 0; i < H; ++i) z += wrow[i] * hs[t + 1][i];
            ps[t][v] = z;
        }
        softmax(ps[t]);
        loss -= std::log(std::max(ps[t][targets[t]], 1e-300));
    }
    if (grads) {
        std::vector<double> dh_next(H, 0.0), dh(H), dhraw(H);
        for (size_t t = T; t-- > 0;) {
            // dL/dz = p - onehot(target)
            std::vector<double> dz = ps[t];
            dz[targets[t]] -= 1.0;
            for (size_t v = 0; v < N; ++v) {
                grads->by[v] += dz[v];
                double* grow = &grads->Why[v * H];
                for (size_t i = 0; i < H; ++i) grow[i] += dz[v] * hs[t + 1][i];
            }
            for (size_t i = 0; i < H; ++i) {
                double d = dh_next[i];
                for (size_t v = 0; v < N; ++v) d += m.Why[v * H + i] * dz[v];
                dh[i] = d;
                dhraw[i] = (1.0 - hs[t + 1][i] * hs[t + 1][i]) * d;
            }
            const Symbol x = inputs[t];
            for (size_t i = 0; i < H; ++i) {
                grads->Wxh[i * N + x] += dhraw[i];
                grads->bh[i] += dhraw[i];
                double* grow = &grads->Whh[i * H];
                for (size_t j = 0; j < H; ++j) grow[j] += dhraw[i] * hs[t][j];
            }
            for (size_t j = 0; j < H; ++j) {
                double d = 0.0;
                for (size_t i = 0; i < H; ++i) d += m.Whh[i * H + j] * dhraw[i];
                dh_next[j] = d;
            }
        }
    }
    h_in = hs[T];
    return loss;
}

RnnModel train_once(const SymbolSequence& seq, const RnnConfig& cfg, uint64_t seed) {
    RnnModel m = RnnModel::init(seq.alphabet_size, cfg.hidden, seed);
    const size_t L = cfg.truncation;
    const auto& s = seq.symbols;

    Grads mem(m); // Adagrad accumulators
    for (size_t ep = 0; ep < cfg.epochs; ++ep) {
        std::vector<double> h(m.H, 0.0);
        double total = 0.0;
        size_t count = 0;
        for (size_t start = 0; start + 1 < s.size(); start += L) {
            const size_t T = std::min(L, s.size() - 1 - start);
            auto inputs = std::span<const Symbol>(&s[start], T);
            auto targets = std::span<const Symbol>(&s[start + 1], T);
            Grads g(m);
            total += chunk_loss_and_grads(m, inputs, targets, h, &g);
            count += T;

            const double norm = std::sqrt(g.squared_norm());
            const double clip = norm > 5.0 ? 5.0 / norm : 1.0;
            auto update = [&](std::vector<double>& p, const std::vector<double>& grad,
                              std::vector<double>& acc) {
                for (size_t i = 0; i < p.size(); ++i) {
                    const double gi = grad[i] * clip;
                    acc[i] += gi * gi;
                    p[i] -= cfg.learning_rate * gi / std::sqrt(acc[i] + 1e-8);
                }
            };
            update(m.Wxh, g.Wxh, mem.Wxh);
            update(m.Whh, g.Whh, mem.Whh);
            update(m.bh, g.bh, mem.bh);
            update(m.Why, g.Why, mem.Why);
            update(m.by, g.by, mem.by);
        }
        const double mean = total / static_cast<double>(count);
        if (!std::isfinite(mean))
            throw numeric_error("train_rnn: non-finite loss at epoch " + std::to_string(ep));
        m.epoch_loss.push_back(mean);
    }
    return m;
}

} // namespace

RnnModel RnnModel::init(size_t N, size_t H, uint64_t seed) {
    if (N == 0 || H == 0) throw data_error("RnnModel: empty dimensions");
    Rng rng(seed);
    RnnModel m;
    m.H = H;
    m.N = N;
    auto uniform = [&](size_t count, double scale) {
        std::vector<double> v(count);
        for (double& x : v) x = (2.0 * rng.next_double() - 1.0) * scale;
        return v;
    };
    m.Wxh = uniform(H * N, 1.0 / std::sqrt(static_cast<double>(N)));
    m.Whh = uniform(H * H, 1.0 / std::sqrt(static_cast<double>(H)));
    m.bh.assign(H, 0.0);
    // small output weights keep the initial softmax near uniform
    m.Why = uniform(N * H, 0.1 / std::sqrt(static_cast<double>(H)));
    m.by.assign(N, 0.0);
    return m;
}

RnnModel train_rnn(const SymbolSequence& seq, const RnnConfig& cfg) {
    if (cfg.truncation < 2) throw data_error("train_rnn: truncation must be >= 2");
    if (seq.size() < cfg.truncation) throw data_error("train_rnn: sequence shorter than truncation");
    RnnModel best;
    double best_loss = std::numeric_limits<double>::infinity();
    const size_t restarts = std::max<size_t>(1, cfg.restarts);
    for (size_t r = 0; r < restarts; ++r) {
        RnnModel m = train_once(seq, cfg, cfg.seed + 0x9E3779B9ULL * r);
        if (m.epoch_loss.back() < best_loss) {
            best_loss = m.epoch_loss.back();
            best = std::move(m);
        }
    }
    return best;
}

double rnn_mean_loss(const RnnModel& m, std::span<const Symbol> seq) {
    if (seq.size() < 2) throw data_error("rnn_mean_loss: need at least 2 symbols");
    std::vector<double> h(m.H, 0.0);
    auto inputs = seq.subspan(0, seq.size() - 1);
    auto targets = seq.subspan(1);
    const double total =
        chunk_loss_and_grads(m, inputs, targets, h, nullptr);
    return total / static_cast<double>(inputs.size());
}

double rnn_gradient_check(const RnnModel& model, std::span<const Symbol> batch) {
    if (batch.size() < 2) throw data_error("rnn_gradient_check: batch too short");
    auto inputs = batch.subspan(0, batch.size() - 1);
    auto targets = batch.subspan(1);

    RnnModel m = model;
    std::vector<double> h0(m.H, 0.0);
    Grads analytic(m);
    {
        std::vector<double> h = h0;
        chunk_loss_and_grads(m, inputs, targets, h, &analytic);
    }

    const double step = 1e-5;
    double max_rel = 0.0;
    auto check_param = [&](std::vector<double>& p, const std::vector<double>& g) {
        for (size_t i = 0; i < p.size(); ++i) {
            const double saved = p[i];
            p[i] = saved + step;
            std::vector<double> h = h0;
            const double lp = chunk_loss_and_grads(m, inputs, targets, h, nullptr);
            p[i] = saved - step;
            h = h0;
            const double lm = chunk_loss_and_grads(m, inputs, targets, h, nullptr);
            p[i] = saved;
            const double numeric = (lp - lm) / (2.0 * step);
            const double denom = std::max(std::fabs(g[i]) + std::fabs(numeric), 1e-8);
            max_rel = std::max(max_rel, std::fabs(g[i] - numeric) / denom);
        }
    };
    check_param(m.Wxh, analytic.Wxh);
    check_param(m.Whh, analytic.Whh);
    check_param(m.bh, analytic.bh);
    check_param(m.Why, analytic.Why);
    check_param(m.by, analytic.by);
    return max_rel;
}

void RnnState::advance(const RnnModel& m, Symbol x) {
    if (x >= m.N) throw data_error("rnn: symbol outside alphabet");
    std::vector<double> next(m.H);
    for (size_t i = 0; i < m.H; ++i) {
        double a = m.Wxh[i * m.N + x] + m.bh[i];
        const double* wrow = &m.Whh[i * m.H];
        for (size_t j = 0; j < m.H; ++j) a += wrow[j] * h[j];
        next[i] = std::tanh(a);
    }
    h = std::move(next);
}

Symbol RnnState::predict(const RnnModel& m) const {
    Symbol best = 0;
    double best_z = -std::numeric_limits<double>::infinity();
    for (Symbol v = 0; v < m.N; ++v) {
        double z = m.by[v];
        const double* wrow = &m.Why[v * m.H];
        for (size_t i = 0; i < m.H; ++i) z += wrow[i] * h[i];
        if (z > best_z) {
            best_z = z;
            best = v;
        }
    }
    return best;
}

} // namespace mobility
