#ifndef MOBILITY_IO_HPP
#define MOBILITY_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "mobility/core.hpp"

#include "json.hpp"

namespace mobility {

// Canonical sequence file: CSV rows "user_id,timestamp,symbol", leading
// '#' lines are comments. Users keyed by id.
using UserSequences = std::map<std::string, SymbolSequence>;

std::string read_file(const std::string& path);

// Writes content to path atomically (temp file in the same directory, then
// rename).
void atomic_write(const std::string& path, const std::string& content);

uint64_t fnv1a64(const std::string& content);

UserSequences read_sequence_csv(const std::string& path);

std::string sequence_csv(const UserSequences& users, const std::string& manifest_name);

// Execution record written next to every output; outputs reference it by
// name in their header comment or "manifest" field.
struct RunManifest {
    std::string command_line;
    std::vector<std::pair<std::string, uint64_t>> input_digests;
    uint64_t seed = 0;
    std::string tool_version;
    nlohmann::ordered_json parameters;
    double wall_time_s = 0.0;
    std::vector<std::string> outputs;

    nlohmann::ordered_json to_json() const;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

} // namespace mobility

#endif
