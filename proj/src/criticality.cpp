#include "mobility/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace mobility {

namespace {

struct PairHistograms {
    Histogram x, y, joint;
};

PairHistograms pair_histograms(const SymbolSequence& seq, size_t D) {
    const size_t n = seq.size();
    if (D < 1 || D >= n) throw data_error("mutual_information: separation out of range");
    PairHistograms h;
    const uint64_t N = seq.alphabet_size;
    for (size_t i = 0; i + D < n; ++i) {
        const uint64_t a = seq.symbols[i];
        const uint64_t b = seq.symbols[i + D];
        h.x.add(a);
        h.y.add(b);
        h.joint.add(a * N + b);
    }
    return h;
}

} // namespace

double mutual_information(const SymbolSequence& seq, size_t D, EntropyEstimator est) {
    const auto h = pair_histograms(seq, D);
    return entropy(h.x, est) + entropy(h.y, est) - entropy(h.joint, est);
}

double joint_entropy(const SymbolSequence& seq, size_t D, EntropyEstimator est) {
    return entropy(pair_histograms(seq, D).joint, est);
}

double unique_pair_ratio(const SymbolSequence& seq, size_t D) {
    const auto h = pair_histograms(seq, D);
    uint64_t unique = 0;
    for (const auto& [key, c] : h.joint.counts)
        if (c == 1) ++unique;
    return static_cast<double>(unique) / static_cast<double>(h.joint.total);
}

MIDecayCurve mi_decay_curve(const SymbolSequence& seq, size_t D_max, EntropyEstimator est) {
    if (D_max >= seq.size()) throw data_error("mi_decay_curve: D_max must be < n");
    MIDecayCurve curve;
    curve.estimator = est;
    const double noise_floor =
        100.0 * static_cast<double>(seq.alphabet_size) * static_cast<double>(seq.alphabet_size);
    for (size_t D = 1; D <= D_max; ++D) {
        const size_t pairs = seq.size() - D;
        curve.points.push_back({D, mutual_information(seq, D, est), pairs,
                                static_cast<double>(pairs) < noise_floor});
    }
    return curve;
}

double kl_divergence(const Histogram& p, const Histogram& q) {
    if (p.empty() || q.empty()) throw data_error("kl_divergence: empty histogram");
    const double np = static_cast<double>(p.total);
    const double nq = static_cast<double>(q.total);
    double d = 0.0;
    for (const auto& [key, cp] : p.counts) {
        auto it = q.counts.find(key);
        if (it == q.counts.end())
            throw data_error("kl_divergence: q has no mass on symbol " + std::to_string(key));
        const double pp = static_cast<double>(cp) / np;
        const double qq = static_cast<double>(it->second) / nq;
        d += pp * std::log2(pp / qq);
    }
    return d;
}

namespace {

PowerLawFit tail_fit(const std::vector<double>& sorted, size_t first_tail_index,
                     const std::vector<double>& suffix_log) {
    const size_t n = sorted.size();
    const size_t i = first_tail_index;
    const double x_min = sorted[i];
    const size_t n_tail = n - i;
    const double log_sum = suffix_log[i] - static_cast<double>(n_tail) * std::log(x_min);
    if (log_sum <= 0.0) throw data_error("fit_power_law: degenerate tail");
    const double alpha = 1.0 + static_cast<double>(n_tail) / log_sum;
    double ks = 0.0;
    for (size_t j = i; j < n; ++j) {
        const double model = 1.0 - std::pow(sorted[j] / x_min, 1.0 - alpha);
        const double emp_hi = static_cast<double>(j - i + 1) / static_cast<double>(n_tail);
        const double emp_lo = static_cast<double>(j - i) / static_cast<double>(n_tail);
        ks = std::max(ks, std::max(std::fabs(model - emp_hi), std::fabs(model - emp_lo)));
    }
    return {alpha, x_min, ks, n_tail};
}

} // namespace

PowerLawFit fit_power_law_at(const std::vector<double>& xs, double x_min) {
    if (xs.empty()) throw data_error("fit_power_law: no samples");
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() <= 0.0) throw data_error("fit_power_law: samples must be positive");
    std::vector<double> suffix_log(sorted.size() + 1, 0.0);
    for (size_t i = sorted.size(); i-- > 0;)
        suffix_log[i] = suffix_log[i + 1] + std::log(sorted[i]);
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), x_min);
    if (it == sorted.end()) throw data_error("fit_power_law: x_min beyond all samples");
    auto fit = tail_fit(sorted, static_cast<size_t>(it - sorted.begin()), suffix_log);
    fit.x_min = x_min;
    return fit;
}

PowerLawFit fit_power_law(const std::vector<double>& xs) {
    if (xs.size() < 10) throw data_error("fit_power_law: need at least 10 samples");
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() <= 0.0) throw data_error("fit_power_law: samples must be positive");
    if (sorted.front() == sorted.back())
        throw data_error("fit_power_law: all samples equal");

    const size_t n = sorted.size();
    // suffix sums of ln x for O(1) tail statistics per candidate
    std::vector<double> suffix_log(n + 1, 0.0);
    for (size_t i = n; i-- > 0;) suffix_log[i] = suffix_log[i + 1] + std::log(sorted[i]);

    bool found = false;
    PowerLawFit best{0.0, 0.0, 2.0, 0};
    for (size_t i = 0; i < n; ++i) {
        if (i > 0 && sorted[i] == sorted[i - 1]) continue; // distinct candidates only
        if (n - i < 10) break;
        const double log_sum =
            suffix_log[i] - static_cast<double>(n - i) * std::log(sorted[i]);
        if (log_sum <= 0.0) continue; // degenerate tail
        const auto fit = tail_fit(sorted, i, suffix_log);
        if (!found || fit.ks_statistic < best.ks_statistic) {
            best = fit;
            found = true;
        }
    }
    if (!found) throw data_error("fit_power_law: no candidate threshold with 10 tail samples");
    return best;
}

namespace {

struct LineFit {
    double slope;
    double r2;
    bool ok;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return {0.0, 0.0, false};
    const double slope = sxy / sxx;
    double ssr = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double fit = my + slope * (x[i] - mx);
        ssr += (y[i] - fit) * (y[i] - fit);
    }
    return {slope, 1.0 - ssr / syy, true};
}

} // namespace

DecayVerdict classify_decay(const MIDecayCurve& curve) {
    std::vector<double> log_d, d, log_i;
    for (const auto& p : curve.points) {
        if (p.noise_flagged || p.I <= 1e-6) continue;
        log_d.push_back(std::log(static_cast<double>(p.D)));
        d.push_back(static_cast<double>(p.D));
        log_i.push_back(std::log(p.I));
    }
    if (log_d.size() < 5)
        throw data_error("classify_decay: fewer than 5 usable points");

    const auto power = least_squares(log_d, log_i);
    const auto expo = least_squares(d, log_i);

    DecayVerdict v{};
    v.r2_power = power.ok ? power.r2 : 0.0;
    v.r2_exponential = expo.ok ? expo.r2 : 0.0;
    if (!power.ok || !expo.ok || std::fabs(v.r2_power - v.r2_exponential) < 0.02) {
        v.law = DecayLaw::undetermined;
        v.exponent_or_rate = 0.0;
    } else if (v.r2_power > v.r2_exponential) {
        v.law = DecayLaw::power;
        v.exponent_or_rate = -power.slope;
    } else {
        v.law = DecayLaw::exponential;
        v.exponent_or_rate = -expo.slope;
    }
    return v;
}

std::vector<RankPoint> rank_frequencies(const SymbolSequence& seq, RankBinning binning) {
    if (seq.symbols.empty()) return {};
    std::unordered_map<Symbol, uint64_t> counts;
    for (Symbol s : seq.symbols) ++counts[s];
    std::vector<std::pair<Symbol, uint64_t>> by_count(counts.begin(), counts.end());
    std::sort(by_count.begin(), by_count.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    const double n = static_cast<double>(seq.size());

    std::vector<RankPoint> out;
    if (binning == RankBinning::raw) {
        for (size_t r = 0; r < by_count.size(); ++r)
            out.push_back({static_cast<double>(r + 1),
                           static_cast<double>(by_count[r].second) / n});
        return out;
    }
    // bins over ranks [2^j, 2^(j+1)); each bin normalized by its width
    size_t lo = 1;
    while (lo <= by_count.size()) {
        const size_t hi = lo * 2;
        double mass = 0.0;
        for (size_t r = lo; r < hi && r <= by_count.size(); ++r)
            mass += static_cast<double>(by_count[r - 1].second) / n;
        out.push_back({static_cast<double>(lo), mass / static_cast<double>(hi - lo)});
        lo = hi;
    }
    return out;
}

Histogram dwell_time_distribution(const std::vector<Visit>& visits) {
    Histogram h;
    for (const auto& v : visits) {
        const double dwell = v.dwell();
        uint64_t edge = 0; // first bin pools everything below 60 s
        if (dwell >= 60.0) {
            edge = 60;
            while (dwell >= static_cast<double>(edge) * 2.0) edge *= 2;
        }
        h.add(edge);
    }
    return h;
}

double radius_of_gyration(const std::vector<RawPoint>& points) {
    if (points.empty()) throw data_error("radius_of_gyration: no points");
    double clat = 0.0, clon = 0.0;
    for (const auto& p : points) {
        clat += p.lat;
        clon += p.lon;
    }
    clat /= static_cast<double>(points.size());
    clon /= static_cast<double>(points.size());
    const double m_per_deg = 111320.0;
    const double cos_lat = std::cos(clat * M_PI / 180.0);
    double sum = 0.0;
    for (const auto& p : points) {
        const double dy = (p.lat - clat) * m_per_deg;
        const double dx = (p.lon - clon) * m_per_deg * cos_lat;
        sum += dx * dx + dy * dy;
    }
    return std::sqrt(sum / static_cast<double>(points.size()));
}

} // namespace mobility
