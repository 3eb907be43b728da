// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// An optional argument filters by criterion name (e.g. "AC-4").

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mobility/bound.hpp"
#include "mobility/criticality.hpp"
#include "mobility/entropy.hpp"
#include "mobility/eval.hpp"
#include "mobility/rng.hpp"
#include "mobility/rnn.hpp"
#include "mobility/synth.hpp"
#include "mobility/trajectory.hpp"

using namespace mobility;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

// ---------------------------------------------------------------- AC-1

Outcome ac1_table_reproduction() {
    const auto privamov = predictability_bound(6.63, 2651);
    const auto geolife = predictability_bound(7.77, 3892);
    const bool p_ok = std::fabs(privamov.pi_max - 0.5049) <= 0.005;
    const bool g_ok = std::fabs(geolife.pi_max - 0.4319) <= 0.005;
    // the published NMDC row is internally inconsistent: F(0.6522) is far
    // from the printed 5.08, so it is excluded rather than asserted
    const double nmdc_gap = std::fabs(fano_forward(0.6522, 2087) - 5.08);
    const bool n_flagged = nmdc_gap > 0.25;

    std::ostringstream os;
    os.precision(5);
    os << "PrivaMov pi=" << privamov.pi_max << " GeoLife pi=" << geolife.pi_max
       << " NMDC residual=" << nmdc_gap << " (excluded as inconsistent)";
    return {p_ok && g_ok && n_flagged, os.str()};
}

// ---------------------------------------------------------------- AC-2

Outcome ac2_round_trip() {
    Rng rng(20240202);
    size_t tested = 0, failed = 0;
    double worst = 0.0;
    while (tested < 1000) {
        const uint64_t N = 2 + rng.next_below(9999);
        const double lo = 1.0 / static_cast<double>(N);
        const double pi = lo + (1.0 - lo) * (1e-9 + (1.0 - 2e-9) * rng.next_double());
        const double S = fano_forward(pi, N);
        if (S < 0.0 || S > std::log2(static_cast<double>(N))) continue;
        ++tested;
        const double err = std::fabs(predictability_bound(S, N).pi_max - pi);
        worst = std::max(worst, err);
        if (err > 1e-6) ++failed;
    }
    std::ostringstream os;
    os << "1000 pairs, worst |pi - pi_hat| = " << worst;
    return {failed == 0, os.str()};
}

// ---------------------------------------------------------------- AC-3

Outcome ac3_markov_bound_consistency() {
    size_t bound_violations = 0, accuracy_misses = 0;
    double worst_gap = 0.0;
    for (uint64_t seed = 0; seed < 100; ++seed) {
        const auto spec = MarkovSpec::random_ergodic(10, 3000 + seed, 0.3);
        const double rate = markov_entropy_rate(spec);
        const double opt = markov_optimal_accuracy(spec);
        const double pi_max = predictability_bound(rate, 10).pi_max;
        if (opt > pi_max + 1e-6) ++bound_violations;

        const auto seq = gen_markov(spec, 100000);
        MarkovPredictor predictor(1);
        const double acc = online_evaluate(seq, predictor, 1000).accuracy;
        worst_gap = std::max(worst_gap, std::fabs(acc - opt));
        if (std::fabs(acc - opt) > 0.02) ++accuracy_misses;
    }
    std::ostringstream os;
    os << "100 chains, bound violations=" << bound_violations
       << ", accuracy misses=" << accuracy_misses << ", worst |acc-opt|=" << worst_gap;
    return {bound_violations == 0 && accuracy_misses == 0, os.str()};
}

// ---------------------------------------------------------------- AC-4

Outcome ac4_decay_dichotomy() {
    size_t exponential_hits = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        auto spec = MarkovSpec::random_ergodic(8, 4100 + seed, 0.82);
        const auto seq = gen_markov(spec, 1 << 16);
        const auto curve = mi_decay_curve(seq, 16, EntropyEstimator::grassberger);
        if (classify_decay(curve).law == DecayLaw::exponential) ++exponential_hits;
    }
    size_t power_hits = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const auto spec = GrammarSpec::random_rules(8, 16, 0.1, 4200 + seed);
        const auto seq = gen_grammar(spec);
        const auto curve = mi_decay_curve(seq, 32, EntropyEstimator::grassberger);
        if (classify_decay(curve).law == DecayLaw::power) ++power_hits;
    }
    std::ostringstream os;
    os << "markov exponential " << exponential_hits << "/20, grammar power " << power_hits
       << "/20";
    return {exponential_hits >= 16 && power_hits >= 16, os.str()};
}

// ---------------------------------------------------------------- AC-5

Outcome ac5_bound_violation() {
    size_t wins = 0;
    std::ostringstream os;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const auto spec = GrammarSpec::doubling_rules(8, 16, 0.20, 5300 + seed);
        const auto seq = gen_grammar(spec);
        const size_t n = seq.size();
        const size_t warmup = 3 * n / 4;

        MarkovPredictor markov(1);
        const double markov_acc = online_evaluate(seq, markov, warmup).accuracy;

        Histogram h = histogram_of(seq);
        const double s_paper = entropy_lz(seq, LzMode::paper);
        const double pi_max = predictability_bound(s_paper, h.counts.size()).pi_max;

        SymbolSequence train;
        train.symbols.assign(seq.symbols.begin(), seq.symbols.begin() + warmup);
        train.alphabet_size = seq.alphabet_size;
        RnnConfig cfg;
        cfg.hidden = 64;
        cfg.truncation = 64;
        cfg.learning_rate = 0.1;
        cfg.epochs = 20;
        cfg.restarts = 3;
        cfg.seed = 97 * seed + 11;
        RnnPredictor rnn(train_rnn(train, cfg));
        const double rnn_acc = online_evaluate(seq, rnn, warmup).accuracy;

        const bool win = rnn_acc > markov_acc && rnn_acc > pi_max;
        wins += win;
        os << (win ? "+" : "-");
    }
    std::ostringstream detail;
    detail << wins << "/10 seeds (rnn beats markov-1 and paper-mode pi_max) [" << os.str()
           << "]";
    return {wins >= 7, detail.str()};
}

// ---------------------------------------------------------------- AC-6

Outcome ac6_estimator_convergence() {
    const auto spec = MarkovSpec::random_ergodic(10, 2024, 0.3);
    const double rate = markov_entropy_rate(spec);
    const auto seq = gen_markov(spec, 100000);
    const double s_kont = entropy_lz(seq, LzMode::kontoyiannis);
    const bool converges = std::fabs(s_kont - rate) <= 0.15;

    size_t inflation_hits = 0;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = GrammarSpec::random_rules(8, 14, 0.1, 6100 + seed);
        const auto gseq = gen_grammar(g);
        if (entropy_lz(gseq, LzMode::paper) > entropy_lz(gseq, LzMode::kontoyiannis))
            ++inflation_hits;
    }
    std::ostringstream os;
    os << "rate=" << rate << " S_kont=" << s_kont << " |err|=" << std::fabs(s_kont - rate)
       << "; paper>kont on " << inflation_hits << "/10 grammar seeds";
    return {converges && inflation_hits >= 8, os.str()};
}

// ---------------------------------------------------------------- AC-7

Outcome ac7_grassberger_bias() {
    double mae_plugin = 0.0, mae_grass = 0.0;
    for (uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(7000 + seed);
        Histogram h;
        for (int i = 0; i < 100; ++i) h.add(rng.next_below(8));
        mae_plugin += std::fabs(entropy_plugin(h) - 3.0);
        mae_grass += std::fabs(entropy_grassberger(h) - 3.0);
    }
    mae_plugin /= 200.0;
    mae_grass /= 200.0;
    std::ostringstream os;
    os << "MAE plugin=" << mae_plugin << " grassberger=" << mae_grass;
    return {mae_grass < mae_plugin, os.str()};
}

// ---------------------------------------------------------------- AC-8

Outcome ac8_power_law_recovery() {
    Rng rng(8800);
    std::vector<double> xs;
    const double planted_xmin = 6.0;
    for (int i = 0; i < 10000; ++i) {
        if (rng.next_double() < 0.3)
            xs.push_back(1.0 + 5.0 * rng.next_double()); // body below the threshold
        else
            xs.push_back(planted_xmin * std::pow(1.0 - rng.next_double(), -1.0 / 1.5));
    }
    const auto fit = fit_power_law(xs);
    const bool alpha_ok = std::fabs(fit.alpha - 2.5) <= 0.1;
    const bool xmin_ok =
        fit.x_min >= planted_xmin / 2.0 && fit.x_min <= planted_xmin * 2.0;
    std::ostringstream os;
    os << "alpha=" << fit.alpha << " x_min=" << fit.x_min << " (planted 2.5, 6.0), n_tail="
       << fit.n_tail;
    return {alpha_ok && xmin_ok, os.str()};
}

// ---------------------------------------------------------------- AC-9

Outcome ac9_resampling_reduction() {
    constexpr double kCell = 250.0, kMeterPerDeg = 111320.0;
    const double dlat = kCell / kMeterPerDeg, dlon = kCell / kMeterPerDeg;
    const GridSpec grid{kCell, 0.0};

    size_t under_below = 0, over_below = 0, joint_up = 0, dpi_ok = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const auto spec = MarkovSpec::random_ergodic(8, 9100 + seed, 0.6);
        const auto states = gen_markov(spec, 1 << 14);

        // states sit on cell centers three cells apart, so midpoints of
        // distinct states land in genuinely new cells
        std::vector<RawPoint> points;
        points.reserve(states.size());
        for (size_t i = 0; i < states.size(); ++i)
            points.push_back({0.5 * dlat, (3.0 * states.symbols[i] + 0.5) * dlon,
                              static_cast<double>(i)});

        const auto orig = discretize(points, grid);
        const auto under = undersample(orig, 2);
        const auto over = discretize(oversample(points, 2), grid);

        const auto est = EntropyEstimator::grassberger;
        const double i_orig1 = mutual_information(orig, 1, est);
        const double i_orig2 = mutual_information(orig, 2, est);
        const double i_under1 = mutual_information(under, 1, est);
        const double i_over2 = mutual_information(over, 2, est);

        if (i_under1 < i_orig1) ++under_below;            // same-D reduction
        if (i_under1 <= i_orig2 + 0.05) ++dpi_ok;         // matched kD with slack
        if (i_over2 < i_orig1) ++over_below;              // matched physical separation
        if (joint_entropy(over, 2, est) > joint_entropy(orig, 2, est)) ++joint_up;
    }
    std::ostringstream os;
    os << "under<orig " << under_below << "/20, over<orig " << over_below
       << "/20, jointH up " << joint_up << "/20, data-processing " << dpi_ok << "/20";
    return {under_below > 10 && over_below > 10 && joint_up > 10 && dpi_ok == 20, os.str()};
}

// ---------------------------------------------------------------- AC-10

Outcome ac10_gradient_correctness() {
    double worst = 0.0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const auto model = RnnModel::init(3, 4, 1000 + seed);
        Rng rng(2000 + seed);
        std::vector<Symbol> batch;
        for (int i = 0; i < 6; ++i) batch.push_back(static_cast<Symbol>(rng.next_below(3)));
        worst = std::max(worst, rnn_gradient_check(model, batch));
    }
    std::ostringstream os;
    os << "20 models, worst relative error = " << worst;
    return {worst < 1e-4, os.str()};
}

// ---------------------------------------------------------------- AC-11

Outcome ac11_ingestion_smoke() {
    // Fixture: three stays in two cells; the short middle stay is dropped and
    // its neighbors merge. Cells are ~250 m apart in longitude at lat 40.
    const std::string header =
        "Geolife trajectory\nWGS 84\nAltitude is in Feet\nReserved 3\n"
        "0,2,255,My Track,0,0,2,8421376\n0\n";
    std::ostringstream rows;
    // cell A: 00:00:00 .. 00:20:00 (dwell 1200 s)
    rows << "40.0001,116.3001,0,100,0,2008-10-23,00:00:00\n";
    rows << "40.0001,116.3001,0,100,0,2008-10-23,00:10:00\n";
    rows << "40.0001,116.3001,0,100,0,2008-10-23,00:20:00\n";
    // cell B (~350 m east): 00:21:00 .. 00:24:00 (dwell 180 s, dropped)
    rows << "40.0001,116.3042,0,100,0,2008-10-23,00:21:00\n";
    rows << "40.0001,116.3042,0,100,0,2008-10-23,00:24:00\n";
    // back to cell A: 00:25:00 .. 00:50:00
    rows << "40.0001,116.3001,0,100,0,2008-10-23,00:25:00\n";
    rows << "40.0001,116.3001,0,100,0,2008-10-23,00:50:00\n";
    // cell C (~1 km east): 01:00:00 .. 01:30:00
    rows << "40.0001,116.3120,0,100,0,2008-10-23,01:00:00\n";
    rows << "40.0001,116.3120,0,100,0,2008-10-23,01:30:00\n";

    const auto points = parse_plt(header + rows.str());
    if (points.size() != 9) return {false, "expected 9 parsed points"};
    const auto seq = discretize(points, {250.0, 40.0});
    if (seq.alphabet_size != 3) return {false, "expected 3 distinct cells"};

    // min_dwell 600 s: visit sequence collapses to A (merged across B), C
    const auto visits = extract_visits(seq, 600.0);
    bool hand_ok = visits.size() == 2 && visits[0].symbol == 0 && visits[1].symbol == 2 &&
                   visits[0].arrive == points[0].t && visits[0].dwell() == 3000.0;

    // min_dwell 0: A, B, A, C survive
    const auto all_visits = extract_visits(seq, 0.0);
    hand_ok = hand_ok && all_visits.size() == 4 && all_visits[1].symbol == 1 &&
              all_visits[2].symbol == 0;

    // self-transition freedom on random sequences
    Rng rng(1111);
    size_t violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<Symbol> symbols;
        std::vector<double> ts;
        const size_t n = 1 + rng.next_below(60);
        double t = 0.0;
        for (size_t i = 0; i < n; ++i) {
            symbols.push_back(static_cast<Symbol>(rng.next_below(5)));
            t += static_cast<double>(rng.next_below(900));
            ts.push_back(t);
        }
        const auto v = extract_visits(SymbolSequence::from_symbols(symbols, ts), 300.0);
        for (size_t i = 1; i < v.size(); ++i)
            if (v[i].symbol == v[i - 1].symbol) ++violations;
    }
    std::ostringstream os;
    os << "hand-traced visits " << (hand_ok ? "match" : "MISMATCH") << ", self-transitions="
       << violations << "/1000 sequences";
    return {hand_ok && violations == 0, os.str()};
}

} // namespace

int main(int argc, char** argv) {
    const std::string filter = argc > 1 ? argv[1] : "";
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"AC-1", ac1_table_reproduction},
        {"AC-2", ac2_round_trip},
        {"AC-3", ac3_markov_bound_consistency},
        {"AC-4", ac4_decay_dichotomy},
        {"AC-5", ac5_bound_violation},
        {"AC-6", ac6_estimator_convergence},
        {"AC-7", ac7_grassberger_bias},
        {"AC-8", ac8_power_law_recovery},
        {"AC-9", ac9_resampling_reduction},
        {"AC-10", ac10_gradient_correctness},
        {"AC-11", ac11_ingestion_smoke},
    };

    int failures = 0;
    bool ran_any = false;
    for (const auto& [name, fn] : criteria) {
        if (!filter.empty() && name != filter) continue;
        ran_any = true;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = fn();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%-6s %s  (%.1fs) — %s\n", name.c_str(),
                    outcome.pass ? "PASS" : "FAIL", secs, outcome.detail.c_str());
        if (!outcome.pass) ++failures;
    }
    if (!ran_any) {
        std::fprintf(stderr, "unknown criterion: %s\n", filter.c_str());
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
