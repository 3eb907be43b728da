#include "mobility/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mobility {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw data_error("cannot write file: " + tmp);
        out << content;
        if (!out) throw data_error("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw data_error("rename failed for " + path + ": " + ec.message());
}

uint64_t fnv1a64(const std::string& content) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : content) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

UserSequences read_sequence_csv(const std::string& path) {
    const std::string content = read_file(path);
    std::istringstream is(content);
    std::string line;
    size_t line_no = 0;
    struct Raw {
        std::vector<Symbol> symbols;
        std::vector<double> ts;
    };
    std::map<std::string, Raw> raw;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("user_id", 0) == 0) continue;
        std::istringstream ls(line);
        std::string user, ts_field, sym_field;
        if (!std::getline(ls, user, ',') || !std::getline(ls, ts_field, ',') ||
            !std::getline(ls, sym_field, ','))
            throw data_error(path + ": malformed row at line " + std::to_string(line_no));
        // stoul would silently wrap negatives
        if (sym_field.find('-') != std::string::npos)
            throw data_error(path + ": negative symbol id at line " + std::to_string(line_no));
        try {
            raw[user].ts.push_back(std::stod(ts_field));
            unsigned long sym = std::stoul(sym_field);
            if (sym > 0xFFFFFFFFUL) throw std::out_of_range("symbol");
            raw[user].symbols.push_back(static_cast<Symbol>(sym));
        } catch (const std::exception&) {
            throw data_error(path + ": malformed row at line " + std::to_string(line_no));
        }
    }
    if (raw.empty()) throw data_error(path + ": no sequence rows");
    UserSequences users;
    for (auto& [user, r] : raw) {
        SymbolSequence seq;
        seq.symbols = std::move(r.symbols);
        seq.timestamps = std::move(r.ts);
        Symbol max_id = 0;
        for (Symbol s : seq.symbols) max_id = std::max(max_id, s);
        seq.alphabet_size = max_id + 1;
        seq.validate();
        users.emplace(user, std::move(seq));
    }
    return users;
}

std::string sequence_csv(const UserSequences& users, const std::string& manifest_name) {
    std::ostringstream out;
    out.precision(10);
    out << "# manifest: " << manifest_name << "\n";
    out << "user_id,timestamp,symbol\n";
    for (const auto& [user, seq] : users) {
        for (size_t i = 0; i < seq.size(); ++i) {
            const double t = seq.has_timestamps() ? seq.timestamps[i]
                                                  : static_cast<double>(i);
            out << user << ',' << t << ',' << seq.symbols[i] << '\n';
        }
    }
    return out.str();
}

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["command_line"] = command_line;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
    for (const auto& [path, digest] : input_digests) {
        nlohmann::ordered_json e;
        e["path"] = path;
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
        e["fnv1a64"] = buf;
        inputs.push_back(e);
    }
    j["inputs"] = inputs;
    j["seed"] = seed;
    j["tool_version"] = tool_version;
    j["parameters"] = parameters;
    j["wall_time_s"] = wall_time_s;
    j["outputs"] = outputs;
    return j;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    atomic_write(path, manifest.to_json().dump(2) + "\n");
}

} // namespace mobility
