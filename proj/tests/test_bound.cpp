#include <cmath>

#include "doctest.h"

#include "mobility/bound.hpp"
#include "mobility/core.hpp"
#include "mobility/rng.hpp"

using namespace mobility;

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
    CHECK(binary_entropy(0.0) == doctest::Approx(0.0));
    CHECK(binary_entropy(1.0) == doctest::Approx(0.0));
    CHECK(binary_entropy(0.25) == doctest::Approx(0.8112781244591328).epsilon(1e-12));
    CHECK_THROWS_AS(binary_entropy(-0.1), data_error);
    CHECK_THROWS_AS(binary_entropy(1.1), data_error);
}

TEST_CASE("bound reproduces the published dataset rows") {
    CHECK(predictability_bound(6.63, 2651).pi_max == doctest::Approx(0.5049).epsilon(0.01));
    CHECK(std::fabs(predictability_bound(6.63, 2651).pi_max - 0.5049) < 0.005);
    CHECK(std::fabs(predictability_bound(7.77, 3892).pi_max - 0.4319) < 0.005);
}

TEST_CASE("bound endpoints") {
    CHECK(predictability_bound(0.0, 17).pi_max == doctest::Approx(1.0));
    // at pi = 1/N the forward map equals log2 N exactly
    CHECK(predictability_bound(2.0, 4).pi_max == doctest::Approx(0.25));
    CHECK(fano_forward(0.25, 4) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("bound rejects invalid inputs") {
    CHECK_THROWS_AS(predictability_bound(-0.1, 10), data_error);
    CHECK_THROWS_AS(predictability_bound(4.0, 10), numeric_error); // log2 10 = 3.32
    CHECK_THROWS_AS(predictability_bound(1.0, 1), data_error);
    // a hair above log2 N is absorbed as estimator rounding
    CHECK(predictability_bound(std::log2(10.0) + 5e-7, 10).pi_max ==
          doctest::Approx(0.1));
}

TEST_CASE("residual is within the solver tolerance") {
    Rng rng(313);
    for (int trial = 0; trial < 200; ++trial) {
        const uint64_t N = 2 + rng.next_below(5000);
        const double S = rng.next_double() * std::log2(static_cast<double>(N));
        CHECK(predictability_bound(S, N).residual <= 1e-9);
    }
}

TEST_CASE("pi_max decreases in S and increases in N") {
    for (uint64_t N : {4ull, 64ull, 1024ull}) {
        double prev = 1.1;
        for (double f : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const double S = f * std::log2(static_cast<double>(N));
            const double pi = predictability_bound(S, N).pi_max;
            CHECK(pi < prev);
            prev = pi;
        }
    }
    for (double S : {1.0, 2.0}) {
        double prev = 0.0;
        for (uint64_t N : {8ull, 32ull, 512ull, 8192ull}) {
            const double pi = predictability_bound(S, N).pi_max;
            CHECK(pi > prev);
            prev = pi;
        }
    }
}

TEST_CASE("round trip through the forward map") {
    Rng rng(777);
    for (int trial = 0; trial < 500; ++trial) {
        const uint64_t N = 2 + rng.next_below(10000);
        const double lo = 1.0 / static_cast<double>(N);
        const double pi = lo + (1.0 - lo) * (1e-6 + (1.0 - 2e-6) * rng.next_double());
        const double S = fano_forward(pi, N);
        if (S < 0.0 || S > std::log2(static_cast<double>(N))) continue;
        CHECK(std::fabs(predictability_bound(S, N).pi_max - pi) < 1e-6);
    }
}
