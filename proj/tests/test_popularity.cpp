#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "mmcache/popularity.hpp"

using namespace mmcache;

TEST(Popularity, SumsToOne) {
    for (std::size_t L : {1u, 3u, 10u, 1000u})
        for (double u : {0.0, 0.1, 0.8, 2.0, 5.0}) {
            const auto f = zipf_popularity(L, u).probabilities();
            EXPECT_NEAR(std::accumulate(f.begin(), f.end(), 0.0), 1.0, 1e-12) << L << " " << u;
        }
}

TEST(Popularity, ZeroExponentIsUniform) {
    const auto p = zipf_popularity(7, 0.0);
    for (std::size_t i = 1; i <= 7; ++i) EXPECT_DOUBLE_EQ(p.probability(i), 1.0 / 7.0);
}

TEST(Popularity, ClosedFormRatios) {
    const auto p = zipf_popularity(10, 0.8);
    double h = 0.0;
    for (int j = 1; j <= 10; ++j) h += std::pow(j, -0.8);
    for (std::size_t i = 1; i <= 10; ++i) EXPECT_NEAR(p.probability(i), std::pow(i, -0.8) / h, 1e-15);
    for (std::size_t i = 1; i < 10; ++i) EXPECT_GT(p.probability(i), p.probability(i + 1));
}

TEST(Popularity, SamplingMatchesProbabilities) {
    const auto p = zipf_popularity(5, 1.2);
    std::mt19937_64 rng(11);
    const int n = 200000;
    std::vector<int> counts(6, 0);
    for (int k = 0; k < n; ++k) ++counts.at(p.sample_request(rng));
    EXPECT_EQ(counts[0], 0);
    for (std::size_t i = 1; i <= 5; ++i) {
        const double f = p.probability(i);
        EXPECT_NEAR(counts[i] / double(n), f, 4 * std::sqrt(f * (1 - f) / n));
    }
}

TEST(Popularity, RejectsInvalid) {
    EXPECT_THROW(zipf_popularity(0, 1.0), std::invalid_argument);
    EXPECT_THROW(zipf_popularity(5, -0.1), std::invalid_argument);
    EXPECT_THROW(zipf_popularity(5, std::nan("")), std::invalid_argument);
    EXPECT_THROW(zipf_popularity(5, 1.0).probability(6), std::out_of_range);
}
