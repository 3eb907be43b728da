#include "doctest.h"

#include "mobility/rng.hpp"
#include "mobility/trajectory.hpp"

using namespace mobility;

namespace {

const char* kPltHeader =
    "Geolife trajectory\n"
    "WGS 84\n"
    "Altitude is in Feet\n"
    "Reserved 3\n"
    "0,2,255,My Track,0,0,2,8421376\n"
    "0\n";

SymbolSequence seq_of(std::vector<Symbol> symbols, std::vector<double> ts) {
    return SymbolSequence::from_symbols(symbols, std::move(ts));
}

} // namespace

TEST_CASE("parse_plt reads well-formed rows") {
    std::string content = std::string(kPltHeader) +
                          "39.984702,116.318417,0,492,39744.1201851852,2008-10-23,02:53:04\n"
                          "39.984683,116.31845,0,492,39744.1202546296,2008-10-23,02:53:10\n";
    auto pts = parse_plt(content);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].lat == doctest::Approx(39.984702));
    CHECK(pts[0].lon == doctest::Approx(116.318417));
    // 2008-10-23 02:53:04 UTC
    CHECK(pts[0].t == doctest::Approx(1224730384.0));
    CHECK(pts[1].t - pts[0].t == doctest::Approx(6.0));
}

TEST_CASE("parse_plt header-only file yields no points") {
    CHECK(parse_plt(kPltHeader).empty());
}

TEST_CASE("parse_plt rejects out-of-range latitude with the line number") {
    std::string content = std::string(kPltHeader) +
                          "91.0,116.3,0,492,39744.12,2008-10-23,02:53:04\n";
    CHECK_THROWS_WITH_AS(parse_plt(content), doctest::Contains("line 7"), data_error);
}

TEST_CASE("parse_plt rejects malformed rows") {
    std::string content = std::string(kPltHeader) + "not,a,row\n";
    CHECK_THROWS_AS(parse_plt(content), data_error);
}

TEST_CASE("discretize maps identical points to one cell") {
    std::vector<RawPoint> pts{{39.9847, 116.3184, 0.0}, {39.9847, 116.3184, 10.0}};
    auto seq = discretize(pts, {250.0, 40.0});
    CHECK(seq.symbols == std::vector<Symbol>{0, 0});
    CHECK(seq.alphabet_size == 1);
}

TEST_CASE("discretize keeps points 10 m apart in one 250 m cell") {
    // 10 m of longitude at the equator is ~8.98e-5 degrees; place the pair
    // mid-cell so the small offset cannot cross a boundary
    const double dlon = 250.0 / 111320.0;
    std::vector<RawPoint> pts{{0.001, 0.5 * dlon, 0.0},
                              {0.001, 0.5 * dlon + 10.0 / 111320.0, 1.0}};
    auto seq = discretize(pts, {250.0, 0.0});
    CHECK(seq.alphabet_size == 1);
}

TEST_CASE("discretize encodes far-apart cells by first appearance") {
    std::vector<RawPoint> pts{{10.0, 10.0, 0.0}, {20.0, 20.0, 1.0}, {30.0, 30.0, 2.0}};
    auto seq = discretize(pts, {250.0, 20.0});
    CHECK(seq.symbols == std::vector<Symbol>{0, 1, 2});
    CHECK(seq.alphabet_size == 3);
}

TEST_CASE("discretize rejects pole-adjacent reference latitude") {
    std::vector<RawPoint> pts{{0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(discretize(pts, {250.0, 89.9}), data_error);
}

TEST_CASE("extract_visits merges runs and spans first-to-last timestamp") {
    auto seq = seq_of({0, 0, 0, 1, 1, 2}, {0, 1, 2, 3, 4, 5});
    auto visits = extract_visits(seq, 0.0);
    REQUIRE(visits.size() == 3);
    CHECK(visits[0].symbol == 0);
    CHECK(visits[0].dwell() == doctest::Approx(2.0));
    CHECK(visits[1].dwell() == doctest::Approx(1.0));
    CHECK(visits[2].dwell() == doctest::Approx(0.0));
}

TEST_CASE("extract_visits merges across a dropped short visit") {
    // a-visits span 100 s each; the middle b visit spans 0 s and is dropped
    auto seq = seq_of({0, 0, 1, 0, 0}, {0.0, 100.0, 150.0, 200.0, 300.0});
    auto visits = extract_visits(seq, 60.0);
    REQUIRE(visits.size() == 1);
    CHECK(visits[0].symbol == 0);
    CHECK(visits[0].arrive == doctest::Approx(0.0));
    CHECK(visits[0].depart == doctest::Approx(300.0));
}

TEST_CASE("extract_visits on empty input") {
    SymbolSequence seq;
    seq.alphabet_size = 0;
    CHECK(extract_visits(seq, 0.0).empty());
}

TEST_CASE("extract_visits output has no self-transitions on random input") {
    Rng rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<Symbol> symbols;
        std::vector<double> ts;
        const size_t n = 1 + rng.next_below(40);
        double t = 0.0;
        for (size_t i = 0; i < n; ++i) {
            symbols.push_back(static_cast<Symbol>(rng.next_below(4)));
            t += static_cast<double>(rng.next_below(500));
            ts.push_back(t);
        }
        auto visits = extract_visits(seq_of(symbols, ts), 120.0);
        for (size_t i = 1; i < visits.size(); ++i)
            REQUIRE(visits[i].symbol != visits[i - 1].symbol);
    }
}

TEST_CASE("undersample keeps every k-th element and re-encodes") {
    auto seq = seq_of({0, 1, 2, 3, 4, 5}, {0, 1, 2, 3, 4, 5});
    auto out = undersample(seq, 2);
    CHECK(out.symbols == std::vector<Symbol>{0, 1, 2});
    CHECK(out.timestamps == std::vector<double>{0, 2, 4});
    CHECK(out.alphabet_size == 3);

    CHECK(undersample(seq, 1).symbols == seq.symbols);
    CHECK(undersample(seq, 5).symbols == std::vector<Symbol>{0, 1});
    CHECK_THROWS_AS(undersample(seq, 0), data_error);
}

TEST_CASE("undersample length is ceil(n/k)") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const size_t n = 1 + rng.next_below(200);
        std::vector<Symbol> symbols;
        for (size_t i = 0; i < n; ++i)
            symbols.push_back(static_cast<Symbol>(rng.next_below(6)));
        const size_t k = 1 + rng.next_below(7);
        auto out = undersample(seq_of(symbols, {}), k);
        CHECK(out.size() == (n + k - 1) / k);
    }
}

TEST_CASE("oversample inserts linear midpoints") {
    std::vector<RawPoint> pts{{0.0, 0.0, 0.0}, {0.0, 1.0, 10.0}};
    auto out = oversample(pts, 2);
    REQUIRE(out.size() == 3);
    CHECK(out[1].lon == doctest::Approx(0.5));
    CHECK(out[1].t == doctest::Approx(5.0));

    CHECK(oversample(pts, 1).size() == 2);
    std::vector<RawPoint> three{{0, 0, 0}, {0, 1, 1}, {0, 2, 2}};
    CHECK(oversample(three, 4).size() == 9);
    std::vector<RawPoint> one{{0, 0, 0}};
    CHECK_THROWS_AS(oversample(one, 2), data_error);
}

TEST_CASE("oversample then undersample restores the point count") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<RawPoint> pts;
        const size_t n = 2 + rng.next_below(50);
        for (size_t i = 0; i < n; ++i)
            pts.push_back({rng.next_double(), rng.next_double(), static_cast<double>(i)});
        const size_t k = 1 + rng.next_below(5);
        auto over = oversample(pts, k);
        CHECK(over.size() == (n - 1) * k + 1);
        size_t kept = 0;
        for (size_t i = 0; i < over.size(); i += k) ++kept;
        CHECK(kept == n);
    }
}

TEST_CASE("dense ids after discretize and undersample") {
    Rng rng(3);
    std::vector<RawPoint> pts;
    for (int i = 0; i < 200; ++i)
        pts.push_back({rng.next_double() * 0.01, rng.next_double() * 0.01,
                       static_cast<double>(i)});
    auto seq = discretize(pts, {250.0, 0.0});
    std::vector<bool> present(seq.alphabet_size, false);
    for (Symbol s : seq.symbols) present[s] = true;
    for (bool p : present) CHECK(p);

    auto sub = undersample(seq, 3);
    std::vector<bool> present2(sub.alphabet_size, false);
    for (Symbol s : sub.symbols) present2[s] = true;
    for (bool p : present2) CHECK(p);
}
