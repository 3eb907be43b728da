#include "mobility/entropy.hpp"

#include <cmath>
#include <map>
#include <unordered_map>

namespace mobility {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

double digamma(double x) {
    // recurrence up to x >= 10, then the asymptotic series
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double f = 1.0 / (x * x);
    result += std::log(x) - 0.5 / x -
              f * (1.0 / 12.0 -
                   f * (1.0 / 120.0 -
                        f * (1.0 / 252.0 -
                             f * (1.0 / 240.0 -
                                  f * (1.0 / 132.0 - f * (691.0 / 32760.0))))));
    return result;
}

double entropy_plugin(const Histogram& h) {
    if (h.empty()) throw data_error("entropy: empty histogram");
    const double n = static_cast<double>(h.total);
    double s = 0.0;
    for (const auto& [key, c] : h.counts) {
        const double p = static_cast<double>(c) / n;
        s -= p * std::log2(p);
    }
    return s;
}

double entropy_grassberger(const Histogram& h) {
    if (h.empty()) throw data_error("entropy: empty histogram");
    const double n = static_cast<double>(h.total);
    double acc = 0.0;
    for (const auto& [key, c] : h.counts)
        acc += static_cast<double>(c) * digamma(static_cast<double>(c));
    return (std::log(n) - acc / n) / kLn2;
}

double entropy(const Histogram& h, EntropyEstimator est) {
    return est == EntropyEstimator::plugin ? entropy_plugin(h) : entropy_grassberger(h);
}

Histogram histogram_of(const SymbolSequence& seq) {
    Histogram h;
    for (Symbol s : seq.symbols) h.add(s);
    return h;
}

namespace {

// Suffix automaton built online over the prefix, used to compute per-index
// matching statistics: the longest prefix of s[i..] that occurs as a
// substring of s[0..i-1].
class SuffixAutomaton {
public:
    SuffixAutomaton() {
        states_.push_back({-1, 0, {}});
        last_ = 0;
    }

    void extend(Symbol c) {
        const int cur = static_cast<int>(states_.size());
        states_.push_back({-1, states_[last_].len + 1, {}});
        int p = last_;
        while (p != -1 && !states_[p].next.count(c)) {
            states_[p].next[c] = cur;
            p = states_[p].link;
        }
        if (p == -1) {
            states_[cur].link = 0;
        } else {
            const int q = states_[p].next[c];
            if (states_[p].len + 1 == states_[q].len) {
                states_[cur].link = q;
            } else {
                const int clone = static_cast<int>(states_.size());
                states_.push_back({states_[q].link, states_[p].len + 1, states_[q].next});
                while (p != -1 && states_[p].next.count(c) && states_[p].next[c] == q) {
                    states_[p].next[c] = clone;
                    p = states_[p].link;
                }
                states_[q].link = clone;
                states_[cur].link = clone;
            }
        }
        last_ = cur;
    }

    bool step(int& state, Symbol c) const {
        auto it = states_[state].next.find(c);
        if (it == states_[state].next.end()) return false;
        state = it->second;
        return true;
    }

    // after shortening the matched string by one leading symbol, walk suffix
    // links until the held state is the canonical one for the new length
    void canonicalize(int& state, size_t len) const {
        while (state != 0 && states_[states_[state].link].len >= static_cast<int>(len))
            state = states_[state].link;
    }

private:
    struct State {
        int link;
        int len;
        std::map<Symbol, int> next;
    };
    std::vector<State> states_;
    int last_;
};

// matching_stats[i] = longest prefix of s[i..n) contained in s[0..i)
std::vector<uint32_t> matching_stats(const std::vector<Symbol>& s) {
    const size_t n = s.size();
    std::vector<uint32_t> m(n, 0);
    SuffixAutomaton sam;
    int state = 0;
    size_t len = 0;
    for (size_t i = 0; i < n; ++i) {
        while (i + len < n) {
            int next_state = state;
            if (!sam.step(next_state, s[i + len])) break;
            state = next_state;
            ++len;
        }
        m[i] = static_cast<uint32_t>(len);
        sam.extend(s[i]);
        if (len > 0) {
            --len;
            sam.canonicalize(state, len);
        }
    }
    return m;
}

} // namespace

LambdaParse lz_parse(const SymbolSequence& seq) {
    const size_t n = seq.size();
    if (n == 0) throw data_error("lz_parse: empty sequence");
    const auto m = matching_stats(seq.symbols);
    LambdaParse parse;
    parse.n = n;
    parse.lambdas.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const uint32_t remaining = static_cast<uint32_t>(n - i);
        // shortest unseen substring = longest match + 1; once even the whole
        // remaining suffix has occurred before, the convention sets 0
        parse.lambdas[i] = (m[i] < remaining) ? m[i] + 1 : 0;
    }
    return parse;
}

double entropy_lz(const SymbolSequence& seq, LzMode mode) {
    const size_t n = seq.size();
    if (n < 2) throw data_error("entropy_lz: need at least 2 symbols");
    const auto m = matching_stats(seq.symbols);
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const uint32_t remaining = static_cast<uint32_t>(n - i);
        if (mode == LzMode::paper)
            sum += (m[i] < remaining) ? m[i] + 1 : 0;
        else
            sum += std::min(m[i] + 1, remaining);
    }
    const double mean = sum / static_cast<double>(n);
    if (mean <= 0.0) throw numeric_error("entropy_lz: degenerate parse (mean lambda 0)");
    return std::log2(static_cast<double>(n)) / mean;
}

double block_entropy(const SymbolSequence& seq, size_t T, EntropyEstimator est) {
    const size_t n = seq.size();
    if (T < 1 || T > n) throw data_error("block_entropy: window length out of range");
    // windows hashed as opaque symbols; FNV-1a over the symbol bytes
    std::unordered_map<uint64_t, uint64_t> counts;
    for (size_t i = 0; i + T <= n; ++i) {
        uint64_t hash = 14695981039346656037ULL;
        for (size_t j = 0; j < T; ++j) {
            uint64_t v = seq.symbols[i + j];
            for (int b = 0; b < 4; ++b) {
                hash ^= (v >> (8 * b)) & 0xFF;
                hash *= 1099511628211ULL;
            }
        }
        ++counts[hash];
    }
    Histogram h;
    for (const auto& [key, c] : counts) h.add(key, c);
    return entropy(h, est);
}

double predictive_information(const SymbolSequence& seq, size_t T, EntropyEstimator est) {
    if (T < 1 || 2 * T > seq.size())
        throw data_error("predictive_information: need 2T <= sequence length");
    return 2.0 * block_entropy(seq, T, est) - block_entropy(seq, 2 * T, est);
}

} // namespace mobility
