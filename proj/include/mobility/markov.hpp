#ifndef MOBILITY_MARKOV_HPP
#define MOBILITY_MARKOV_HPP

#include <span>
#include <unordered_map>
#include <vector>

#include "mobility/core.hpp"

namespace mobility {

// Global next-symbol frequencies; the floor of the back-off chain.
struct FrequencyTable {
    std::unordered_map<Symbol, uint64_t> counts;

    void add(Symbol s) { ++counts[s]; }
    uint64_t count(Symbol s) const {
        auto it = counts.find(s);
        return it == counts.end() ? 0 : it->second;
    }
    // most frequent symbol, ties to the smaller id; 0 when empty
    Symbol mode() const;
};

// Order-k transition counts. Lower-order tables (k-1 .. 1) are kept alongside
// so unseen contexts can back off to shorter suffixes.
class TransitionMatrix {
public:
    TransitionMatrix() = default;
    explicit TransitionMatrix(size_t order) : order_(order), tables_(order) {}

    size_t order() const { return order_; }

    // tallies the (context, next) pair ending at position i for every order
    void observe(std::span<const Symbol> history_through_next);

    void add_pair(std::span<const Symbol> context, Symbol next);

    // successor counts for an exact context of length <= order; nullptr if unseen
    const std::unordered_map<Symbol, uint64_t>* successors(
        std::span<const Symbol> context) const;

    size_t context_count(size_t order) const { return tables_.at(order - 1).size(); }

private:
    struct VecHash {
        size_t operator()(const std::vector<Symbol>& v) const {
            uint64_t h = 14695981039346656037ULL;
            for (Symbol s : v) {
                h ^= s;
                h *= 1099511628211ULL;
            }
            return static_cast<size_t>(h);
        }
    };
    using Table =
        std::unordered_map<std::vector<Symbol>, std::unordered_map<Symbol, uint64_t>, VecHash>;

    size_t order_ = 0;
    std::vector<Table> tables_; // tables_[j] holds contexts of length j+1
};

// Counts over all n-k adjacent (context, next) pairs of the sequence.
TransitionMatrix fit_markov(const SymbolSequence& seq, size_t k);

// Argmax successor with ties broken by higher global frequency then smaller
// id; unseen contexts back off to the suffix of length k-1, ending at the
// most frequent symbol overall.
Symbol markov_predict(const TransitionMatrix& m, std::span<const Symbol> context,
                      const FrequencyTable& fallback);

} // namespace mobility

#endif
