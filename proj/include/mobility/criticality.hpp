#ifndef MOBILITY_CRITICALITY_HPP
#define MOBILITY_CRITICALITY_HPP

#include <vector>

#include "mobility/core.hpp"
#include "mobility/entropy.hpp"
#include "mobility/trajectory.hpp"

namespace mobility {

struct MIPoint {
    size_t D;           // separation in symbols
    double I;           // bits
    size_t pairs_used;  // n - D
    bool noise_flagged; // pairs_used < 100 * N^2, excluded from fits
};

struct MIDecayCurve {
    std::vector<MIPoint> points;
    EntropyEstimator estimator;
};

// I(X, Y) with X = s[0..n-D) and Y = s[D..n); joint symbols are pairs.
double mutual_information(const SymbolSequence& seq, size_t D, EntropyEstimator est);

// Joint entropy H(X, Y) at separation D.
double joint_entropy(const SymbolSequence& seq, size_t D, EntropyEstimator est);

// Fraction of pair types occurring exactly once among all pairs at D.
double unique_pair_ratio(const SymbolSequence& seq, size_t D);

MIDecayCurve mi_decay_curve(const SymbolSequence& seq, size_t D_max, EntropyEstimator est);

// sum_i p_i log2(p_i / q_i); q must cover p's support.
double kl_divergence(const Histogram& p, const Histogram& q);

struct PowerLawFit {
    double alpha;        // exponent, > 1
    double x_min;        // selected threshold, present in the data
    double ks_statistic; // KS distance of the tail fit
    size_t n_tail;       // samples >= x_min
};

// Continuous MLE with the KS-minimizing x_min (Clauset-style selection).
PowerLawFit fit_power_law(const std::vector<double>& xs);

// Same estimate with the threshold fixed by the caller.
PowerLawFit fit_power_law_at(const std::vector<double>& xs, double x_min);

enum class DecayLaw { power, exponential, undetermined };

struct DecayVerdict {
    DecayLaw law;
    double r2_power;
    double r2_exponential;
    double exponent_or_rate; // exponent of D^-a, or rate of e^-rD
};

// Least squares on (ln D, ln I) versus (D, ln I) over usable points
// (unflagged, I > 1e-6); the higher r^2 wins, ties are undetermined.
DecayVerdict classify_decay(const MIDecayCurve& curve);

struct RankPoint {
    double rank;
    double frequency;
};

enum class RankBinning { raw, log_binned };

// Symbols sorted by descending count (ties to the smaller id). Raw mode
// yields (rank, count/n); log-binned mode groups ranks into [2^j, 2^(j+1))
// and divides each bin's summed frequency by the bin width.
std::vector<RankPoint> rank_frequencies(const SymbolSequence& seq, RankBinning binning);

// Histogram over dwell durations with base-2 exponential bins starting at
// 60 s; sub-minute dwells pool into the first bin. Keys are bin lower edges
// in seconds.
Histogram dwell_time_distribution(const std::vector<Visit>& visits);

// sqrt(mean squared equirectangular distance from the centroid), meters.
double radius_of_gyration(const std::vector<RawPoint>& points);

} // namespace mobility

#endif
