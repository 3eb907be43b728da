#ifndef MOBILITY_CORE_HPP
#define MOBILITY_CORE_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mobility {

// Thrown when an input file or value is malformed or out of range.
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a computation cannot proceed numerically (non-finite loss,
// entropy above the random ceiling, degenerate fit, ...).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

using Symbol = uint32_t;

// Temporally ordered discrete location symbols for one user. Timestamps are
// optional; when present they are non-decreasing and parallel to symbols.
struct SymbolSequence {
    std::vector<Symbol> symbols;
    std::vector<double> timestamps; // empty = absent
    Symbol alphabet_size = 0;       // every symbol < alphabet_size

    size_t size() const { return symbols.size(); }
    bool has_timestamps() const { return !timestamps.empty(); }

    // Re-encodes arbitrary ids densely, 0..N-1 in order of first appearance.
    static SymbolSequence from_symbols(const std::vector<Symbol>& raw,
                                       std::vector<double> ts = {});

    void validate() const;
};

// One stay at a location: [arrive, depart] from observed timestamps.
struct Visit {
    Symbol symbol;
    double arrive;
    double depart;

    double dwell() const { return depart - arrive; }
};

// Counts of discrete outcomes. Keys are opaque; entropy depends only on the
// count multiset, KL divergence on the keyed alignment.
struct Histogram {
    std::map<uint64_t, uint64_t> counts;
    uint64_t total = 0;

    void add(uint64_t key, uint64_t c = 1) {
        counts[key] += c;
        total += c;
    }
    bool empty() const { return counts.empty(); }
};

} // namespace mobility

#endif
