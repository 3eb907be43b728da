#include <filesystem>

#include "doctest.h"

#include "mobility/io.hpp"

using namespace mobility;
namespace fs = std::filesystem;

TEST_CASE("sequence CSV round trip") {
    UserSequences users;
    SymbolSequence a;
    a.symbols = {0, 1, 0, 2};
    a.timestamps = {10.0, 20.0, 30.5, 41.0};
    a.alphabet_size = 3;
    users.emplace("u1", a);
    SymbolSequence b;
    b.symbols = {1, 1, 0};
    b.timestamps = {5.0, 6.0, 7.0};
    b.alphabet_size = 2;
    users.emplace("u2", b);

    const auto tmp = fs::temp_directory_path() / "mobility_io_test.csv";
    atomic_write(tmp.string(), sequence_csv(users, "x.manifest.json"));
    auto read = read_sequence_csv(tmp.string());
    REQUIRE(read.size() == 2);
    CHECK(read.at("u1").symbols == a.symbols);
    CHECK(read.at("u1").timestamps == a.timestamps);
    CHECK(read.at("u2").symbols == b.symbols);
    fs::remove(tmp);
    CHECK(!fs::exists(tmp.string() + ".tmp"));
}

TEST_CASE("read_sequence_csv reports malformed rows") {
    const auto tmp = fs::temp_directory_path() / "mobility_io_bad.csv";
    atomic_write(tmp.string(), "user_id,timestamp,symbol\nu1,notanumber,0\n");
    CHECK_THROWS_AS(read_sequence_csv(tmp.string()), data_error);
    atomic_write(tmp.string(), "user_id,timestamp,symbol\nu1,0,-3\n");
    CHECK_THROWS_WITH_AS(read_sequence_csv(tmp.string()),
                         doctest::Contains("negative symbol"), data_error);
    fs::remove(tmp);
}

TEST_CASE("read_sequence_csv rejects empty files") {
    const auto tmp = fs::temp_directory_path() / "mobility_io_empty.csv";
    atomic_write(tmp.string(), "# only comments\n");
    CHECK_THROWS_WITH_AS(read_sequence_csv(tmp.string()),
                         doctest::Contains("mobility_io_empty.csv"), data_error);
    fs::remove(tmp);
}

TEST_CASE("fnv1a64 is stable") {
    CHECK(fnv1a64("") == 14695981039346656037ULL);
    CHECK(fnv1a64("a") == 12638187200555641996ULL);
    CHECK(fnv1a64("abc") != fnv1a64("acb"));
}

TEST_CASE("manifest JSON carries digests and parameters") {
    RunManifest m;
    m.command_line = "mobility test";
    m.input_digests.emplace_back("in.csv", 0x1234abcdULL);
    m.seed = 7;
    m.tool_version = "mobility 0.1.0";
    m.parameters["k"] = 2;
    m.outputs.push_back("out.json");
    const auto j = m.to_json();
    CHECK(j["inputs"][0]["fnv1a64"] == "000000001234abcd");
    CHECK(j["parameters"]["k"] == 2);
    CHECK(j["outputs"][0] == "out.json");
}
