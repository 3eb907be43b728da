#include "mobility/markov.hpp"

#include <algorithm>

namespace mobility {

Symbol FrequencyTable::mode() const {
    Symbol best = 0;
    uint64_t best_count = 0;
    bool any = false;
    for (const auto& [s, c] : counts) {
        if (!any || c > best_count || (c == best_count && s < best)) {
            best = s;
            best_count = c;
            any = true;
        }
    }
    return best;
}

void TransitionMatrix::observe(std::span<const Symbol> history_through_next) {
    const size_t len = history_through_next.size();
    if (len < 2) return;
    const Symbol next = history_through_next[len - 1];
    for (size_t k = 1; k <= order_ && k + 1 <= len; ++k) {
        auto context = history_through_next.subspan(len - 1 - k, k);
        tables_[k - 1][std::vector<Symbol>(context.begin(), context.end())][next]++;
    }
}

void TransitionMatrix::add_pair(std::span<const Symbol> context, Symbol next) {
    const size_t k = context.size();
    if (k == 0 || k > order_) throw data_error("add_pair: context length out of range");
    tables_[k - 1][std::vector<Symbol>(context.begin(), context.end())][next]++;
}

const std::unordered_map<Symbol, uint64_t>* TransitionMatrix::successors(
    std::span<const Symbol> context) const {
    const size_t k = context.size();
    if (k == 0 || k > order_) return nullptr;
    const auto& table = tables_[k - 1];
    auto it = table.find(std::vector<Symbol>(context.begin(), context.end()));
    return it == table.end() ? nullptr : &it->second;
}

TransitionMatrix fit_markov(const SymbolSequence& seq, size_t k) {
    if (k < 1 || k > 5) throw data_error("fit_markov: order must be in 1..5");
    if (seq.size() <= k) throw data_error("fit_markov: sequence shorter than order + 1");
    TransitionMatrix m(k);
    for (size_t i = k; i < seq.size(); ++i)
        m.observe(std::span<const Symbol>(seq.symbols.data(), i + 1));
    return m;
}

Symbol markov_predict(const TransitionMatrix& m, std::span<const Symbol> context,
                      const FrequencyTable& fallback) {
    for (size_t k = std::min(context.size(), m.order()); k >= 1; --k) {
        const auto* succ = m.successors(context.subspan(context.size() - k, k));
        if (!succ || succ->empty()) continue;
        Symbol best = 0;
        uint64_t best_count = 0, best_global = 0;
        bool any = false;
        for (const auto& [s, c] : *succ) {
            const uint64_t g = fallback.count(s);
            if (!any || c > best_count || (c == best_count && g > best_global) ||
                (c == best_count && g == best_global && s < best)) {
                best = s;
                best_count = c;
                best_global = g;
                any = true;
            }
        }
        return best;
    }
    return fallback.mode();
}

} // namespace mobility
