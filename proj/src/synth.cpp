#include "mobility/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mobility/rng.hpp"

namespace mobility {

void MarkovSpec::validate() const {
    const size_t K = M.size();
    if (K == 0) throw data_error("MarkovSpec: empty matrix");
    for (const auto& row : M) {
        if (row.size() != K) throw data_error("MarkovSpec: matrix not square");
        double sum = 0.0;
        for (double v : row) {
            if (v < 0.0) throw data_error("MarkovSpec: negative entry");
            sum += v;
        }
        if (std::fabs(sum - 1.0) > 1e-12)
            throw data_error("MarkovSpec: row does not sum to 1");
    }
    if (initial.size() != K) throw data_error("MarkovSpec: initial distribution size");
    double s = std::accumulate(initial.begin(), initial.end(), 0.0);
    if (std::fabs(s - 1.0) > 1e-12)
        throw data_error("MarkovSpec: initial distribution does not sum to 1");
}

MarkovSpec MarkovSpec::random_ergodic(size_t K, uint64_t seed, double stay) {
    Rng rng(seed);
    MarkovSpec spec;
    spec.seed = seed;
    spec.M.assign(K, std::vector<double>(K, 0.0));
    for (size_t a = 0; a < K; ++a) {
        double sum = 0.0;
        for (size_t b = 0; b < K; ++b) {
            spec.M[a][b] = rng.next_double() + 1e-3;
            sum += spec.M[a][b];
        }
        for (size_t b = 0; b < K; ++b) spec.M[a][b] *= (1.0 - stay) / sum;
        spec.M[a][a] += stay;
        // renormalize exactly
        double s2 = std::accumulate(spec.M[a].begin(), spec.M[a].end(), 0.0);
        for (size_t b = 0; b < K; ++b) spec.M[a][b] /= s2;
    }
    spec.initial.assign(K, 1.0 / static_cast<double>(K));
    return spec;
}

namespace {

Symbol sample_from(const std::vector<double>& probs, Rng& rng) {
    const double r = rng.next_double();
    double acc = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (r < acc) return static_cast<Symbol>(i);
    }
    return static_cast<Symbol>(probs.size() - 1);
}

} // namespace

SymbolSequence gen_markov(const MarkovSpec& spec, size_t n) {
    spec.validate();
    if (n == 0) throw data_error("gen_markov: n must be >= 1");
    Rng rng(spec.seed);
    SymbolSequence seq;
    seq.symbols.reserve(n);
    seq.alphabet_size = static_cast<Symbol>(spec.states());
    Symbol s = sample_from(spec.initial, rng);
    seq.symbols.push_back(s);
    for (size_t i = 1; i < n; ++i) {
        s = sample_from(spec.M[s], rng);
        seq.symbols.push_back(s);
    }
    return seq;
}

ChainClass classify_chain(const std::vector<std::vector<double>>& M) {
    const size_t K = M.size();
    auto reach = [&](size_t from, bool transpose) {
        std::vector<bool> seen(K, false);
        std::vector<size_t> stack{from};
        seen[from] = true;
        while (!stack.empty()) {
            size_t u = stack.back();
            stack.pop_back();
            for (size_t v = 0; v < K; ++v) {
                const double w = transpose ? M[v][u] : M[u][v];
                if (w > 0.0 && !seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
            }
        }
        return seen;
    };
    const auto fwd = reach(0, false);
    const auto bwd = reach(0, true);
    for (size_t v = 0; v < K; ++v)
        if (!fwd[v] || !bwd[v]) return ChainClass::reducible;

    // period = gcd over edges (u,v) of depth(u) + 1 - depth(v) on a BFS tree
    std::vector<int64_t> depth(K, -1);
    std::vector<size_t> queue{0};
    depth[0] = 0;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        size_t u = queue[qi];
        for (size_t v = 0; v < K; ++v)
            if (M[u][v] > 0.0 && depth[v] < 0) {
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
    }
    int64_t g = 0;
    for (size_t u = 0; u < K; ++u)
        for (size_t v = 0; v < K; ++v)
            if (M[u][v] > 0.0) g = std::gcd(g, depth[u] + 1 - depth[v]);
    g = std::llabs(g);
    return g > 1 ? ChainClass::periodic : ChainClass::ergodic;
}

std::vector<double> stationary_distribution(const MarkovSpec& spec) {
    spec.validate();
    if (classify_chain(spec.M) == ChainClass::reducible)
        throw numeric_error("stationary_distribution: chain is reducible");
    const size_t K = spec.states();
    std::vector<double> pi(K, 1.0 / static_cast<double>(K)), next(K);
    // damped iteration pi <- pi (M + I) / 2 shares the fixed point and also
    // converges for periodic chains
    for (int iter = 0; iter < 200000; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (size_t a = 0; a < K; ++a)
            for (size_t b = 0; b < K; ++b) next[b] += pi[a] * spec.M[a][b];
        double delta = 0.0;
        for (size_t b = 0; b < K; ++b) {
            next[b] = 0.5 * (next[b] + pi[b]);
            delta = std::max(delta, std::fabs(next[b] - pi[b]));
        }
        pi.swap(next);
        if (delta < 1e-14) break;
    }
    double s = std::accumulate(pi.begin(), pi.end(), 0.0);
    for (double& v : pi) v /= s;
    return pi;
}

double markov_entropy_rate(const MarkovSpec& spec) {
    const auto pi = stationary_distribution(spec);
    double h = 0.0;
    for (size_t a = 0; a < spec.states(); ++a)
        for (double p : spec.M[a])
            if (p > 0.0) h -= pi[a] * p * std::log2(p);
    return h;
}

double markov_optimal_accuracy(const MarkovSpec& spec) {
    const auto pi = stationary_distribution(spec);
    double acc = 0.0;
    for (size_t a = 0; a < spec.states(); ++a)
        acc += pi[a] * *std::max_element(spec.M[a].begin(), spec.M[a].end());
    return acc;
}

void GrammarSpec::validate() const {
    if (alphabet == 0) throw data_error("GrammarSpec: empty alphabet");
    if (rules.size() != alphabet) throw data_error("GrammarSpec: rule table not total");
    for (const auto& [l, r] : rules)
        if (l >= alphabet || r >= alphabet)
            throw data_error("GrammarSpec: rule child outside alphabet");
    if (epsilon < 0.0 || epsilon > 1.0)
        throw data_error("GrammarSpec: epsilon outside [0, 1]");
}

GrammarSpec GrammarSpec::random_rules(uint32_t alphabet, uint32_t depth, double epsilon,
                                      uint64_t seed) {
    GrammarSpec spec;
    spec.alphabet = alphabet;
    spec.depth = depth;
    spec.epsilon = epsilon;
    spec.seed = seed;
    Rng rng(seed ^ 0xA5A5A5A5A5A5A5A5ULL); // table stream separate from the path stream
    std::vector<Symbol> left(alphabet), right(alphabet);
    for (uint32_t i = 0; i < alphabet; ++i) left[i] = right[i] = i;
    for (uint32_t i = alphabet; i > 1; --i) {
        std::swap(left[i - 1], left[rng.next_below(i)]);
        std::swap(right[i - 1], right[rng.next_below(i)]);
    }
    spec.rules.resize(alphabet);
    for (uint32_t i = 0; i < alphabet; ++i) spec.rules[i] = {left[i], right[i]};
    return spec;
}

GrammarSpec GrammarSpec::doubling_rules(uint32_t alphabet, uint32_t depth, double epsilon,
                                        uint64_t seed) {
    GrammarSpec spec;
    spec.alphabet = alphabet;
    spec.depth = depth;
    spec.epsilon = epsilon;
    spec.seed = seed;
    spec.rules.resize(alphabet);
    for (uint32_t s = 0; s < alphabet; ++s)
        spec.rules[s] = {static_cast<Symbol>((2 * s) % alphabet),
                         static_cast<Symbol>((2 * s + 1) % alphabet)};
    return spec;
}

SymbolSequence gen_grammar(const GrammarSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    std::vector<Symbol> cur{static_cast<Symbol>(rng.next_below(spec.alphabet))};
    for (uint32_t round = 0; round < spec.depth; ++round) {
        std::vector<Symbol> next;
        next.reserve(cur.size() * 2);
        for (Symbol s : cur) {
            const auto& [l, r] = spec.rules[s];
            for (Symbol child : {l, r}) {
                if (spec.epsilon > 0.0 && rng.next_double() < spec.epsilon)
                    child = static_cast<Symbol>(rng.next_below(spec.alphabet));
                next.push_back(child);
            }
        }
        cur.swap(next);
    }
    SymbolSequence seq;
    seq.symbols = std::move(cur);
    seq.alphabet_size = spec.alphabet;
    return seq;
}

} // namespace mobility
