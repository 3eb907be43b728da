// mobility: entropy, predictability bounds, predictors and criticality
// diagnostics for discrete location sequences.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "mobility/bound.hpp"
#include "mobility/criticality.hpp"
#include "mobility/entropy.hpp"
#include "mobility/eval.hpp"
#include "mobility/io.hpp"
#include "mobility/synth.hpp"
#include "mobility/trajectory.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace mobility;

namespace {

constexpr const char* kVersion = "mobility 0.1.0";

// exit codes: 0 success, 2 usage, 3 data error, 4 numeric failure
constexpr int kUsageError = 2;
constexpr int kDataError = 3;
constexpr int kNumericError = 4;

std::string resolve_input(const std::string& path) {
    if (fs::exists(path)) return path;
    if (const char* dir = std::getenv("MOBILITY_DATA_DIR")) {
        const fs::path joined = fs::path(dir) / path;
        if (fs::exists(joined)) return joined.string();
    }
    return path;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

RunManifest make_manifest(const std::string& command_line, uint64_t seed,
                          const ordered_json& params) {
    RunManifest m;
    m.command_line = command_line;
    m.seed = seed;
    m.tool_version = kVersion;
    m.parameters = params;
    return m;
}

void add_input_digest(RunManifest& m, const std::string& path) {
    m.input_digests.emplace_back(path, fnv1a64(read_file(path)));
}

void finalize_outputs(RunManifest& m, const std::string& primary_output,
                      const std::string& content, const Timer& timer) {
    const std::string manifest_path = primary_output + ".manifest.json";
    m.outputs.push_back(primary_output);
    m.wall_time_s = timer.seconds();
    atomic_write(primary_output, content);
    write_manifest(manifest_path, m);
}

// runs fn(user, seq) over users on `jobs` threads; results are collected in
// deterministic (sorted-by-user) order
template <typename Fn>
std::vector<ordered_json> for_each_user(const UserSequences& users, unsigned jobs, Fn fn) {
    std::vector<std::pair<std::string, const SymbolSequence*>> items;
    for (const auto& [user, seq] : users) items.emplace_back(user, &seq);
    std::vector<ordered_json> results(items.size());
    if (jobs <= 1 || items.size() <= 1) {
        for (size_t i = 0; i < items.size(); ++i)
            results[i] = fn(items[i].first, *items[i].second);
        return results;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    std::mutex error_mutex;
    std::exception_ptr first_error;
    for (unsigned t = 0; t < jobs; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= items.size()) return;
                try {
                    results[i] = fn(items[i].first, *items[i].second);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

std::string join_args(int argc, char** argv) {
    std::ostringstream os;
    for (int i = 0; i < argc; ++i) {
        if (i) os << ' ';
        os << argv[i];
    }
    return os.str();
}

SymbolSequence preprocess(const SymbolSequence& seq, const std::string& mode,
                          double min_dwell) {
    if (mode == "samples") return seq;
    return visits_to_sequence(extract_visits(seq, min_dwell));
}

// ---------------------------------------------------------------- ingest

int cmd_ingest(const std::string& command_line, const std::string& input,
               const std::string& format, double cell_size, double ref_lat,
               bool ref_lat_given, const std::string& output) {
    Timer timer;
    std::map<std::string, std::vector<RawPoint>> users;

    const std::string path = resolve_input(input);
    if (format == "plt") {
        std::vector<fs::path> files;
        if (fs::is_directory(path)) {
            for (const auto& entry : fs::recursive_directory_iterator(path))
                if (entry.is_regular_file() && entry.path().extension() == ".plt")
                    files.push_back(entry.path());
            std::sort(files.begin(), files.end());
        } else {
            files.push_back(path);
        }
        if (files.empty()) throw data_error("no .plt files under " + path);
        for (const auto& f : files) {
            // GeoLife layout Data/<user>/Trajectory/x.plt; otherwise the stem
            std::string user = f.stem().string();
            const auto parent = f.parent_path();
            if (parent.filename() == "Trajectory" && parent.has_parent_path())
                user = parent.parent_path().filename().string();
            auto pts = parse_plt(read_file(f.string()));
            auto& dst = users[user];
            dst.insert(dst.end(), pts.begin(), pts.end());
        }
    } else {
        for (const auto& cp : parse_csv_points(read_file(path)))
            users[cp.user_id].push_back(cp.point);
    }

    for (auto& [user, pts] : users)
        std::stable_sort(pts.begin(), pts.end(),
                         [](const RawPoint& a, const RawPoint& b) { return a.t < b.t; });

    // grid anchored at the pooled median latitude unless given explicitly
    if (!ref_lat_given) {
        std::vector<RawPoint> all;
        for (const auto& [user, pts] : users) all.insert(all.end(), pts.begin(), pts.end());
        ref_lat = median_latitude(all);
    }
    const GridSpec grid{cell_size, ref_lat};

    // one cell-id space across users so collective statistics can pool ids
    std::map<std::pair<int64_t, int64_t>, Symbol> cells;
    UserSequences sequences;
    ordered_json user_stats = ordered_json::array();
    for (const auto& [user, pts] : users) {
        if (pts.empty()) continue;
        SymbolSequence seq;
        seq.symbols.reserve(pts.size());
        seq.timestamps.reserve(pts.size());
        std::set<Symbol> distinct;
        for (const auto& p : pts) {
            auto [it, inserted] = cells.emplace(cell_of(p, grid),
                                                static_cast<Symbol>(cells.size()));
            seq.symbols.push_back(it->second);
            seq.timestamps.push_back(p.t);
            distinct.insert(it->second);
        }
        ordered_json stats;
        stats["user"] = user;
        stats["n"] = seq.size();
        stats["N"] = distinct.size();
        user_stats.push_back(stats);
        sequences.emplace(user, std::move(seq));
    }
    for (auto& [user, seq] : sequences) {
        seq.alphabet_size = static_cast<Symbol>(cells.size());
        seq.validate();
    }

    ordered_json params;
    params["format"] = format;
    params["cell_size_m"] = cell_size;
    params["ref_lat_deg"] = ref_lat;
    params["users"] = user_stats;
    RunManifest manifest = make_manifest(command_line, 0, params);
    if (fs::is_directory(path)) {
        // digest the sorted file list; per-file contents already shape the output
        std::vector<std::string> names;
        for (const auto& entry : fs::recursive_directory_iterator(path))
            if (entry.is_regular_file()) names.push_back(entry.path().string());
        std::sort(names.begin(), names.end());
        std::string listing;
        for (const auto& name : names) listing += name + "\n";
        manifest.input_digests.emplace_back(path, fnv1a64(listing));
    } else {
        add_input_digest(manifest, path);
    }
    const std::string manifest_name = fs::path(output).filename().string() + ".manifest.json";
    finalize_outputs(manifest, output, sequence_csv(sequences, manifest_name), timer);
    return 0;
}

// ---------------------------------------------------------------- entropy

int cmd_entropy(const std::string& command_line, const std::string& input,
                const std::string& mode, double min_dwell, unsigned jobs,
                const std::string& output) {
    Timer timer;
    const std::string path = resolve_input(input);
    const auto users = read_sequence_csv(path);

    auto rows = for_each_user(users, jobs, [&](const std::string& user,
                                               const SymbolSequence& raw) {
        const SymbolSequence seq = preprocess(raw, mode, min_dwell);
        if (seq.size() < 2)
            throw data_error(path + ": user " + user + " has fewer than 2 symbols after preprocessing");
        const auto parse = lz_parse(seq);
        std::map<uint32_t, uint64_t> lambda_hist;
        for (uint32_t l : parse.lambdas) ++lambda_hist[l];

        const Histogram h = histogram_of(seq);
        ordered_json row;
        row["user"] = user;
        row["mode"] = mode;
        row["n"] = seq.size();
        row["N"] = h.counts.size();
        row["S_rand"] = std::log2(static_cast<double>(h.counts.size()));
        row["S_unc"] = entropy_plugin(h);
        row["S_real_paper"] = entropy_lz(seq, LzMode::paper);
        row["S_real_kontoyiannis"] = entropy_lz(seq, LzMode::kontoyiannis);
        ordered_json lh = ordered_json::object();
        for (const auto& [l, c] : lambda_hist) lh[std::to_string(l)] = c;
        row["lambda_histogram"] = lh;
        return row;
    });

    ordered_json params;
    params["mode"] = mode;
    params["min_dwell_s"] = min_dwell;
    RunManifest manifest = make_manifest(command_line, 0, params);
    add_input_digest(manifest, path);
    ordered_json doc;
    doc["manifest"] = fs::path(output).filename().string() + ".manifest.json";
    doc["users"] = rows;
    finalize_outputs(manifest, output, doc.dump(2) + "\n", timer);
    return 0;
}

// ---------------------------------------------------------------- bound

ordered_json bound_json(double S, uint64_t N) {
    const auto b = predictability_bound(S, N);
    ordered_json j;
    j["S"] = b.S;
    j["N"] = b.N;
    j["pi_max"] = b.pi_max;
    j["residual"] = b.residual;
    return j;
}

int cmd_bound(const std::string& command_line, double S, uint64_t N,
              const std::string& input, const std::string& output) {
    Timer timer;
    ordered_json doc;
    RunManifest manifest = make_manifest(command_line, 0, ordered_json::object());
    if (!input.empty()) {
        const std::string path = resolve_input(input);
        const auto parsed = nlohmann::json::parse(read_file(path));
        ordered_json rows = ordered_json::array();
        for (const auto& row : parsed.at("users")) {
            ordered_json b = bound_json(row.at("S_real_paper").get<double>(),
                                        row.at("N").get<uint64_t>());
            b["user"] = row.at("user");
            rows.push_back(b);
        }
        add_input_digest(manifest, path);
        doc["users"] = rows;
    } else {
        doc = bound_json(S, N);
    }
    if (output.empty()) {
        std::cout << doc.dump(2) << "\n";
        return 0;
    }
    doc["manifest"] = fs::path(output).filename().string() + ".manifest.json";
    finalize_outputs(manifest, output, doc.dump(2) + "\n", timer);
    return 0;
}

// ---------------------------------------------------------------- predict

int cmd_predict(const std::string& command_line, const std::string& input,
                const std::string& model, double warmup_frac, uint64_t seed,
                const std::string& mode, double min_dwell, unsigned jobs,
                const std::string& output, const std::string& curve_output) {
    Timer timer;
    const std::string path = resolve_input(input);
    const auto users = read_sequence_csv(path);
    const size_t curve_points = curve_output.empty() ? 0 : 256;

    std::string kind = model;
    size_t param = 0;
    if (const auto colon = model.find(':'); colon != std::string::npos) {
        kind = model.substr(0, colon);
        const std::string arg = model.substr(colon + 1);
        if (arg.size() < 2 || arg[0] != 'k')
            throw data_error("model parameter must look like k2: " + model);
        param = std::stoul(arg.substr(1));
    }

    auto rows = for_each_user(users, jobs, [&](const std::string& user,
                                               const SymbolSequence& raw) {
        SymbolSequence seq = preprocess(raw, mode, min_dwell);
        seq = SymbolSequence::from_symbols(seq.symbols, seq.timestamps);
        const size_t warmup = std::max<size_t>(1, static_cast<size_t>(
                                                      warmup_frac * static_cast<double>(seq.size())));
        if (warmup >= seq.size())
            throw data_error("user " + user + ": warmup consumes the whole sequence");

        std::unique_ptr<Predictor> predictor;
        if (kind == "markov") {
            predictor = std::make_unique<MarkovPredictor>(param == 0 ? 1 : param);
        } else if (kind == "hmm") {
            SymbolSequence train;
            train.symbols.assign(seq.symbols.begin(), seq.symbols.begin() + warmup);
            train.alphabet_size = seq.alphabet_size;
            HmmConfig cfg;
            cfg.states = param == 0 ? 8 : param;
            cfg.seed = seed;
            predictor = std::make_unique<HmmPredictor>(fit_hmm(train, cfg));
        } else if (kind == "rnn") {
            SymbolSequence train;
            train.symbols.assign(seq.symbols.begin(), seq.symbols.begin() + warmup);
            train.alphabet_size = seq.alphabet_size;
            RnnConfig cfg;
            cfg.seed = seed;
            predictor = std::make_unique<RnnPredictor>(train_rnn(train, cfg));
        } else {
            throw data_error("unknown model: " + model);
        }

        const EvalReport report = online_evaluate(seq, *predictor, warmup, curve_points);
        ordered_json row;
        row["user"] = user;
        row["model"] = model;
        row["accuracy"] = report.accuracy;
        row["predictions_made"] = report.predictions_made;
        row["warmup_skipped"] = report.warmup_skipped;
        if (curve_points > 0) {
            ordered_json curve = ordered_json::array();
            for (const auto& [idx, acc] : report.curve)
                curve.push_back(ordered_json::array({idx, acc}));
            row["curve"] = curve;
        }
        return row;
    });

    ordered_json params;
    params["model"] = model;
    params["warmup_frac"] = warmup_frac;
    params["mode"] = mode;
    params["min_dwell_s"] = min_dwell;
    RunManifest manifest = make_manifest(command_line, seed, params);
    add_input_digest(manifest, path);

    if (!curve_output.empty()) {
        // accuracy-vs-evaluated-index curves, one block per user
        std::ostringstream csv;
        csv.precision(10);
        csv << "# manifest: " << fs::path(output).filename().string()
            << ".manifest.json\n";
        csv << "user_id,evaluated,accuracy\n";
        for (const auto& row : rows)
            for (const auto& point : row.at("curve"))
                csv << row.at("user").get<std::string>() << ','
                    << point[0].get<size_t>() << ',' << point[1].get<double>() << '\n';
        atomic_write(curve_output, csv.str());
        manifest.outputs.push_back(curve_output);
    }

    ordered_json doc;
    doc["manifest"] = fs::path(output).filename().string() + ".manifest.json";
    ordered_json slim = ordered_json::array();
    for (auto row : rows) {
        row.erase("curve");
        slim.push_back(row);
    }
    doc["users"] = slim;
    finalize_outputs(manifest, output, doc.dump(2) + "\n", timer);
    return 0;
}

// ---------------------------------------------------------------- mi

int cmd_mi(const std::string& command_line, const std::string& input, size_t dmax,
           const std::string& estimator, const std::string& mode, double min_dwell,
           unsigned jobs, const std::string& output) {
    Timer timer;
    const std::string path = resolve_input(input);
    const auto users = read_sequence_csv(path);
    const EntropyEstimator est =
        estimator == "plugin" ? EntropyEstimator::plugin : EntropyEstimator::grassberger;

    auto rows = for_each_user(users, jobs, [&](const std::string& user,
                                               const SymbolSequence& raw) {
        SymbolSequence seq = preprocess(raw, mode, min_dwell);
        seq = SymbolSequence::from_symbols(seq.symbols, seq.timestamps);
        const size_t cap = std::min(dmax, seq.size() - 1);
        const auto curve = mi_decay_curve(seq, cap, est);
        ordered_json j = ordered_json::array();
        for (const auto& p : curve.points) {
            ordered_json e;
            e["user"] = user;
            e["D"] = p.D;
            e["I"] = p.I;
            e["pairs"] = p.pairs_used;
            e["noise_flagged"] = p.noise_flagged;
            e["joint_H"] = joint_entropy(seq, p.D, est);
            e["unique_pair_ratio"] = unique_pair_ratio(seq, p.D);
            j.push_back(e);
        }
        return j;
    });

    std::ostringstream csv;
    csv.precision(12);
    csv << "# manifest: " << fs::path(output).filename().string() << ".manifest.json\n";
    csv << "user_id,D,I,pairs,noise_flagged,joint_H,unique_pair_ratio\n";
    for (const auto& user_rows : rows)
        for (const auto& e : user_rows)
            csv << e["user"].get<std::string>() << ',' << e["D"].get<size_t>() << ','
                << e["I"].get<double>() << ',' << e["pairs"].get<size_t>() << ','
                << (e["noise_flagged"].get<bool>() ? 1 : 0) << ','
                << e["joint_H"].get<double>() << ',' << e["unique_pair_ratio"].get<double>()
                << '\n';

    ordered_json params;
    params["dmax"] = dmax;
    params["estimator"] = estimator;
    params["mode"] = mode;
    RunManifest manifest = make_manifest(command_line, 0, params);
    add_input_digest(manifest, path);
    finalize_outputs(manifest, output, csv.str(), timer);
    return 0;
}

// ---------------------------------------------------------------- fit

int cmd_fit(const std::string& command_line, const std::string& input,
            const std::string& output) {
    Timer timer;
    const std::string path = resolve_input(input);
    std::istringstream is(read_file(path));
    std::vector<double> xs;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0])))
            continue;
        xs.push_back(std::stod(line));
    }
    const auto fit = fit_power_law(xs);
    ordered_json doc;
    doc["alpha"] = fit.alpha;
    doc["x_min"] = fit.x_min;
    doc["ks_statistic"] = fit.ks_statistic;
    doc["n_tail"] = fit.n_tail;
    doc["n_total"] = xs.size();
    RunManifest manifest = make_manifest(command_line, 0, ordered_json::object());
    add_input_digest(manifest, path);
    if (output.empty()) {
        std::cout << doc.dump(2) << "\n";
        return 0;
    }
    doc["manifest"] = fs::path(output).filename().string() + ".manifest.json";
    finalize_outputs(manifest, output, doc.dump(2) + "\n", timer);
    return 0;
}

// ---------------------------------------------------------------- rank / dwell

int cmd_rank(const std::string& command_line, const std::string& input,
             const std::string& binning, const std::string& output) {
    Timer timer;
    const std::string path = resolve_input(input);
    const auto users = read_sequence_csv(path);
    // collective rank distribution over the pooled dataset; canonical files
    // share one cell-id space across users, so pooling ids is meaningful
    std::vector<Symbol> pooled;
    for (const auto& [user, seq] : users)
        pooled.insert(pooled.end(), seq.symbols.begin(), seq.symbols.end());
    SymbolSequence all = SymbolSequence::from_symbols(pooled);
    const auto points = rank_frequencies(
        all, binning == "raw" ? RankBinning::raw : RankBinning::log_binned);

    std::ostringstream csv;
    csv.precision(12);
    csv << "# manifest: " << fs::path(output).filename().string() << ".manifest.json\n";
    csv << "rank,frequency\n";
    for (const auto& p : points) csv << p.rank << ',' << p.frequency << '\n';

    ordered_json params;
    params["binning"] = binning;
    RunManifest manifest = make_manifest(command_line, 0, params);
    add_input_digest(manifest, path);
    finalize_outputs(manifest, output, csv.str(), timer);
    return 0;
}

int cmd_dwell(const std::string& command_line, const std::string& input, double min_dwell,
              const std::string& output) {
    Timer timer;
    const std::string path = resolve_input(input);
    const auto users = read_sequence_csv(path);
    Histogram pooled;
    for (const auto& [user, seq] : users)
        for (const auto& [edge, c] : dwell_time_distribution(extract_visits(seq, min_dwell)).counts)
            pooled.add(edge, c);

    std::ostringstream csv;
    csv << "# manifest: " << fs::path(output).filename().string() << ".manifest.json\n";
    csv << "bin_lower_s,count\n";
    for (const auto& [edge, c] : pooled.counts) csv << edge << ',' << c << '\n';

    ordered_json params;
    params["min_dwell_s"] = min_dwell;
    RunManifest manifest = make_manifest(command_line, 0, params);
    add_input_digest(manifest, path);
    finalize_outputs(manifest, output, csv.str(), timer);
    return 0;
}

// ---------------------------------------------------------------- synth

int cmd_synth_markov(const std::string& command_line, size_t states, size_t n,
                     uint64_t seed, double stay, const std::string& output) {
    Timer timer;
    const MarkovSpec spec = MarkovSpec::random_ergodic(states, seed, stay);
    const SymbolSequence seq = gen_markov(spec, n);

    UserSequences users;
    users.emplace("synth", seq);

    ordered_json params;
    params["kind"] = "markov";
    params["states"] = states;
    params["n"] = n;
    params["stay"] = stay;
    ordered_json oracle;
    const ChainClass cls = classify_chain(spec.M);
    oracle["ergodicity"] = cls == ChainClass::ergodic
                               ? "ergodic"
                               : (cls == ChainClass::reducible ? "reducible" : "periodic");
    if (cls != ChainClass::reducible) {
        oracle["entropy_rate_bits"] = markov_entropy_rate(spec);
        oracle["optimal_accuracy"] = markov_optimal_accuracy(spec);
    }
    params["oracle"] = oracle;

    RunManifest manifest = make_manifest(command_line, seed, params);
    const std::string manifest_name = fs::path(output).filename().string() + ".manifest.json";
    finalize_outputs(manifest, output, sequence_csv(users, manifest_name), timer);
    return 0;
}

int cmd_synth_grammar(const std::string& command_line, uint32_t alphabet, uint32_t depth,
                      double eps, uint64_t seed, const std::string& rules,
                      const std::string& output) {
    Timer timer;
    const GrammarSpec spec = rules == "doubling"
                                 ? GrammarSpec::doubling_rules(alphabet, depth, eps, seed)
                                 : GrammarSpec::random_rules(alphabet, depth, eps, seed);
    const SymbolSequence seq = gen_grammar(spec);
    UserSequences users;
    users.emplace("synth", seq);

    ordered_json params;
    params["kind"] = "grammar";
    params["alphabet"] = alphabet;
    params["depth"] = depth;
    params["epsilon"] = eps;
    params["rules"] = rules;

    RunManifest manifest = make_manifest(command_line, seed, params);
    const std::string manifest_name = fs::path(output).filename().string() + ".manifest.json";
    finalize_outputs(manifest, output, sequence_csv(users, manifest_name), timer);
    return 0;
}

// ---------------------------------------------------------------- report

int cmd_report(const std::string& command_line, const std::vector<std::string>& inputs,
               const std::string& output) {
    Timer timer;
    RunManifest manifest = make_manifest(command_line, 0, ordered_json::object());

    // per-user aggregation: entropy rows contribute n, N, S^real, pi_max;
    // predict rows contribute model accuracies
    std::map<std::string, ordered_json> users;
    for (const auto& raw_path : inputs) {
        const std::string path = resolve_input(raw_path);
        add_input_digest(manifest, path);
        const auto doc = nlohmann::json::parse(read_file(path));
        if (!doc.contains("users")) continue;
        for (const auto& row : doc.at("users")) {
            const std::string user = row.at("user").get<std::string>();
            auto& entry = users[user];
            entry["user"] = user;
            if (row.contains("S_real_paper")) {
                entry["n"] = row.at("n");
                entry["N"] = row.at("N");
                entry["S_real"] = row.at("S_real_paper");
                const auto b = predictability_bound(row.at("S_real_paper").get<double>(),
                                                    row.at("N").get<uint64_t>());
                entry["pi_max"] = b.pi_max;
            }
            if (row.contains("accuracy")) {
                if (!entry.contains("accuracies"))
                    entry["accuracies"] = ordered_json::object();
                entry["accuracies"][row.at("model").get<std::string>()] = row.at("accuracy");
            }
        }
    }

    ordered_json rows = ordered_json::array();
    double sum_s = 0.0, sum_pi = 0.0;
    size_t with_entropy = 0;
    for (const auto& [user, entry] : users) {
        rows.push_back(entry);
        if (entry.contains("S_real")) {
            sum_s += entry["S_real"].get<double>();
            sum_pi += entry["pi_max"].get<double>();
            ++with_entropy;
        }
    }
    ordered_json doc;
    doc["manifest"] = fs::path(output).filename().string() + ".manifest.json";
    if (with_entropy > 0) {
        doc["mean_S_real"] = sum_s / static_cast<double>(with_entropy);
        doc["mean_pi_max"] = sum_pi / static_cast<double>(with_entropy);
    }
    doc["users"] = rows;
    finalize_outputs(manifest, output, doc.dump(2) + "\n", timer);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"information-theoretic analysis of location sequences"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    const std::string command_line = join_args(argc, argv);

    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--jobs", jobs, "worker threads for per-user analyses");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "parse raw trajectories into sequences");
    std::string in_input, in_format = "plt", in_output = "sequences.csv";
    double in_cell = 250.0, in_ref_lat = 0.0, in_min_dwell = 600.0;
    ingest->add_option("--input", in_input, "PLT file/directory or CSV file")->required();
    ingest->add_option("--format", in_format, "plt or csv")
        ->check(CLI::IsMember({"plt", "csv"}));
    ingest->add_option("--cell-size", in_cell, "grid cell size in meters");
    auto* ref_opt = ingest->add_option("--ref-lat", in_ref_lat,
                                       "grid reference latitude (default: median)");
    ingest->add_option("--min-dwell", in_min_dwell, "minimum visit duration in seconds");
    ingest->add_option("--output", in_output, "canonical sequence CSV");

    // entropy
    auto* entropy_cmd = app.add_subcommand("entropy", "entropy estimates per user");
    std::string en_input, en_mode = "visits", en_output = "entropy.json";
    double en_min_dwell = 600.0;
    entropy_cmd->add_option("--input", en_input, "canonical sequence CSV")->required();
    entropy_cmd->add_option("--sequence-mode", en_mode, "visits or samples")
        ->check(CLI::IsMember({"visits", "samples"}));
    entropy_cmd->add_option("--min-dwell", en_min_dwell, "visit threshold in seconds");
    entropy_cmd->add_option("--output", en_output, "per-user entropy JSON");

    // bound
    auto* bound_cmd = app.add_subcommand("bound", "Fano predictability bound");
    double bo_S = -1.0;
    uint64_t bo_N = 0;
    std::string bo_input, bo_output;
    bound_cmd->add_option("--entropy", bo_S, "entropy in bits per symbol");
    bound_cmd->add_option("--locations", bo_N, "distinct location count");
    bound_cmd->add_option("--input", bo_input, "batch mode: entropy JSON");
    bound_cmd->add_option("--output", bo_output, "output JSON (default stdout)");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "online next-place evaluation");
    std::string pr_input, pr_model = "markov:k1", pr_mode = "visits",
                pr_output = "predict.json", pr_curve;
    double pr_warmup = 0.5, pr_min_dwell = 600.0;
    uint64_t pr_seed = 7;
    predict_cmd->add_option("--input", pr_input, "canonical sequence CSV")->required();
    predict_cmd->add_option("--model", pr_model, "markov:kK | hmm:kK | rnn");
    predict_cmd->add_option("--warmup-frac", pr_warmup, "fraction used as warmup")
        ->check(CLI::Range(0.0, 1.0));
    predict_cmd->add_option("--seed", pr_seed, "training seed");
    predict_cmd->add_option("--sequence-mode", pr_mode, "visits or samples")
        ->check(CLI::IsMember({"visits", "samples"}));
    predict_cmd->add_option("--min-dwell", pr_min_dwell, "visit threshold in seconds");
    predict_cmd->add_option("--output", pr_output, "EvalReport JSON");
    predict_cmd->add_option("--curve", pr_curve,
                            "also write accuracy-vs-evaluated-index CSV");

    // mi
    auto* mi_cmd = app.add_subcommand("mi", "mutual information decay curves");
    std::string mi_input, mi_estimator = "grassberger", mi_mode = "samples",
                mi_output = "mi.csv";
    size_t mi_dmax = 256;
    double mi_min_dwell = 600.0;
    mi_cmd->add_option("--input", mi_input, "canonical sequence CSV")->required();
    mi_cmd->add_option("--dmax", mi_dmax, "maximum separation");
    mi_cmd->add_option("--estimator", mi_estimator, "plugin or grassberger")
        ->check(CLI::IsMember({"plugin", "grassberger"}));
    mi_cmd->add_option("--sequence-mode", mi_mode, "visits or samples")
        ->check(CLI::IsMember({"visits", "samples"}));
    mi_cmd->add_option("--min-dwell", mi_min_dwell, "visit threshold in seconds");
    mi_cmd->add_option("--output", mi_output, "curve CSV (user_id,D,I,pairs,flag)");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "power-law MLE with KS-selected x_min");
    std::string fi_input, fi_output;
    fit_cmd->add_option("--input", fi_input, "one positive sample per line")->required();
    fit_cmd->add_option("--output", fi_output, "fit JSON (default stdout)");

    // rank
    auto* rank_cmd = app.add_subcommand("rank", "location visit rank distribution");
    std::string ra_input, ra_binning = "log_binned", ra_output = "rank.csv";
    rank_cmd->add_option("--input", ra_input, "canonical sequence CSV")->required();
    rank_cmd->add_option("--binning", ra_binning, "raw or log_binned")
        ->check(CLI::IsMember({"raw", "log_binned"}));
    rank_cmd->add_option("--output", ra_output, "rank CSV");

    // dwell
    auto* dwell_cmd = app.add_subcommand("dwell", "dwell time distribution");
    std::string dw_input, dw_output = "dwell.csv";
    double dw_min_dwell = 0.0;
    dwell_cmd->add_option("--input", dw_input, "canonical sequence CSV")->required();
    dwell_cmd->add_option("--min-dwell", dw_min_dwell, "visit threshold in seconds");
    dwell_cmd->add_option("--output", dw_output, "dwell histogram CSV");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "synthetic sources with oracles");
    synth_cmd->require_subcommand(1);
    auto* sm = synth_cmd->add_subcommand("markov", "ergodic Markov sample path");
    size_t sm_states = 10, sm_n = 100000;
    uint64_t sm_seed = 7;
    double sm_stay = 0.0;
    std::string sm_output = "markov.csv";
    sm->add_option("--states", sm_states, "number of states");
    sm->add_option("--n", sm_n, "sequence length");
    sm->add_option("--seed", sm_seed, "generator seed");
    sm->add_option("--stay", sm_stay, "diagonal boost in [0,1)");
    sm->add_option("--output", sm_output, "canonical sequence CSV");

    auto* sg = synth_cmd->add_subcommand("grammar", "hierarchical substitution source");
    uint32_t sg_alphabet = 8, sg_depth = 16;
    double sg_eps = 0.1;
    uint64_t sg_seed = 7;
    std::string sg_rules = "random", sg_output = "grammar.csv";
    sg->add_option("--alphabet", sg_alphabet, "alphabet size");
    sg->add_option("--depth", sg_depth, "expansion rounds (length 2^depth)");
    sg->add_option("--eps", sg_eps, "per-child noise probability")->check(CLI::Range(0.0, 1.0));
    sg->add_option("--seed", sg_seed, "generator seed");
    sg->add_option("--rules", sg_rules, "random or doubling")
        ->check(CLI::IsMember({"random", "doubling"}));
    sg->add_option("--output", sg_output, "canonical sequence CSV");

    // report
    auto* report_cmd = app.add_subcommand("report", "aggregate per-user JSON outputs");
    std::vector<std::string> re_inputs;
    std::string re_output = "report.json";
    report_cmd->add_option("--input", re_inputs, "entropy/predict JSON files")->required();
    report_cmd->add_option("--output", re_output, "summary JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0; // --help / --version
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        if (*ingest)
            return cmd_ingest(command_line, in_input, in_format, in_cell, in_ref_lat,
                              ref_opt->count() > 0, in_output);
        if (*entropy_cmd)
            return cmd_entropy(command_line, en_input, en_mode, en_min_dwell, jobs,
                               en_output);
        if (*bound_cmd) {
            if (bo_input.empty() && (bo_S < 0.0 || bo_N < 2)) {
                std::cerr << "usage error: bound needs --entropy and --locations, or --input\n";
                return kUsageError;
            }
            return cmd_bound(command_line, bo_S, bo_N, bo_input, bo_output);
        }
        if (*predict_cmd)
            return cmd_predict(command_line, pr_input, pr_model, pr_warmup, pr_seed,
                               pr_mode, pr_min_dwell, jobs, pr_output, pr_curve);
        if (*mi_cmd)
            return cmd_mi(command_line, mi_input, mi_dmax, mi_estimator, mi_mode,
                          mi_min_dwell, jobs, mi_output);
        if (*fit_cmd) return cmd_fit(command_line, fi_input, fi_output);
        if (*rank_cmd) return cmd_rank(command_line, ra_input, ra_binning, ra_output);
        if (*dwell_cmd) return cmd_dwell(command_line, dw_input, dw_min_dwell, dw_output);
        if (*synth_cmd) {
            if (*sm) return cmd_synth_markov(command_line, sm_states, sm_n, sm_seed,
                                             sm_stay, sm_output);
            return cmd_synth_grammar(command_line, sg_alphabet, sg_depth, sg_eps, sg_seed,
                                     sg_rules, sg_output);
        }
        if (*report_cmd) return cmd_report(command_line, re_inputs, re_output);
    } catch (const numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kNumericError;
    } catch (const data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }
    return kUsageError;
}
