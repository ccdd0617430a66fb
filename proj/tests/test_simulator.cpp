#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mmcache/asp.hpp"
#include "mmcache/optimizer.hpp"
#include "mmcache/simulator.hpp"

using namespace mmcache;

namespace {

CachingPolicy uniform(const NetworkConfig& cfg, std::size_t L) {
    return {baseline_uc(L, cfg.cache_mm), baseline_uc(L, cfg.cache_mu)};
}

SimOptions options(std::size_t trials, std::uint64_t seed, Regime regime, double radius) {
    SimOptions so;
    so.trials = trials;
    so.seed = seed;
    so.regime = regime;
    so.radius = radius;
    return so;
}

}  // namespace

TEST(Simulator, PoissonCountMean) {
    std::mt19937_64 rng(3);
    const double lambda = 5e-5, R = 500.0, mean = lambda * std::numbers::pi * R * R;
    const int n = 10000;
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        const auto pts = sample_ppp(lambda, R, rng);
        s += pts.size();
        for (const auto& p : pts) ASSERT_LE(p.norm(), R);
    }
    EXPECT_NEAR(s / n, mean, 3 * std::sqrt(mean / n));
}

TEST(Simulator, PointsAreUniformInArea) {
    std::mt19937_64 rng(4);
    std::size_t inner = 0, total = 0;
    for (int k = 0; k < 2000; ++k)
        for (const auto& p : sample_ppp(1e-4, 300.0, rng)) {
            ++total;
            inner += p.norm() < 150.0;
        }
    const double f = double(inner) / total;
    EXPECT_NEAR(f, 0.25, 4 * std::sqrt(0.25 * 0.75 / total));
}

TEST(Simulator, CacheAssignmentFrequencies) {
    std::mt19937_64 rng(5);
    const std::vector<double> p{0.9, 0.5, 0.1};
    const auto c = assign_caches(20000, p, rng);
    for (std::size_t i = 0; i < 3; ++i) {
        double n = 0;
        for (const auto& bs : c) n += bs[i];
        EXPECT_NEAR(n / 20000, p[i], 0.015);
    }
    double u = 0.0;
    for (std::uint64_t k = 0; k < 100000; ++k) {
        const double x = cache_uniform(splitmix64(k), 3);
        ASSERT_TRUE(x >= 0.0 && x < 1.0);
        u += x;
    }
    EXPECT_NEAR(u / 100000, 0.5, 0.005);
}

TEST(Simulator, WorkerCountDoesNotChangeResults) {
    const auto cfg = table1_config();
    const auto prof = zipf_popularity(10, 0.8);
    auto so = options(600, 42, Regime::General, 800.0);
    const auto a = estimate_asp(cfg, uniform(cfg, 10), prof, so);
    so.workers = 3;
    const auto b = estimate_asp(cfg, uniform(cfg, 10), prof, so);
    EXPECT_EQ(a.successes, b.successes);
    so.seed = 43;
    const auto c = estimate_asp(cfg, uniform(cfg, 10), prof, so);
    EXPECT_EQ(c.n_trials, 600u);
}

TEST(Simulator, DumpWritesOneJsonLinePerTrial) {
    const auto cfg = table1_config();
    const auto prof = zipf_popularity(10, 0.8);
    std::ostringstream os;
    auto so = options(25, 7, Regime::NoiseLimited, 400.0);
    so.dump = &os;
    const auto est = estimate_asp(cfg, uniform(cfg, 10), prof, so);
    std::istringstream in(os.str());
    std::size_t lines = 0, successes = 0;
    for (std::string line; std::getline(in, line);) {
        const auto j = nlohmann::json::parse(line);
        EXPECT_EQ(j["trial"].get<std::size_t>(), lines);
        EXPECT_TRUE(j.contains("mm_bs"));
        successes += j["success"].get<bool>();
        ++lines;
    }
    EXPECT_EQ(lines, 25u);
    EXPECT_EQ(successes, est.successes);
}

TEST(Simulator, AssociationExtremes) {
    auto cfg = table1_config();
    cfg.lambda_mm = 0.0;
    auto so = options(500, 1, Regime::Simulated, 2000.0);
    EXPECT_EQ(estimate_association(cfg, so).mean, 1.0);
    cfg = table1_config();
    cfg.lambda_mu = 0.0;
    EXPECT_EQ(estimate_association(cfg, so).mean, 0.0);
}

TEST(Simulator, FullCachingUnderNoiseLimitIsCoverage) {
    // With every file everywhere the NL estimate is the plain SNR coverage.
    auto cfg = table1_config();
    cfg.cache_mm = cfg.cache_mu = 2;
    const auto prof = zipf_popularity(2, 1.0);
    const CachingPolicy all{{1.0, 1.0}, {1.0, 1.0}};
    const auto so = options(4000, 11, Regime::NoiseLimited, suggested_sim_radius(cfg));
    const auto est = estimate_asp(cfg, all, prof, so);
    const double exact = asp_nl(cfg, all, prof).total;
    EXPECT_NEAR(est.mean, exact, 4 * std::sqrt(exact * (1 - exact) / so.trials) + 1e-3);
}

TEST(Simulator, NoiseLimitedAgreesWithAnalytic) {
    const auto cfg = table1_config();
    const auto prof = zipf_popularity(10, 2.0);
    const auto pol = optimize_nl(cfg, prof).policy;
    const auto so = options(3000, 5, Regime::NoiseLimited, suggested_sim_radius(cfg));
    const auto est = estimate_asp(cfg, pol, prof, so);
    EXPECT_NEAR(est.mean, asp_nl(cfg, pol, prof).total, 0.03);
}

TEST(Simulator, RadiusDoublingIsInvisible) {
    const auto cfg = table1_config();
    const auto prof = zipf_popularity(10, 0.8);
    const double R = suggested_sim_radius(cfg);
    const auto a = estimate_asp(cfg, uniform(cfg, 10), prof, options(3000, 8, Regime::General, R));
    const auto b = estimate_asp(cfg, uniform(cfg, 10), prof, options(3000, 9, Regime::General, 2 * R));
    EXPECT_NEAR(a.mean, b.mean, std::hypot(a.ci_halfwidth, b.ci_halfwidth) * 1.5);
}

TEST(Simulator, SuggestedRadiusCoversTails) {
    const auto cfg = table1_config();
    const double R = suggested_sim_radius(cfg);
    EXPECT_GE(R, cfg.radius);
    const double b = cfg.blockage;
    const double outside = 2 * std::numbers::pi * cfg.lambda_mm * std::exp(-b * R) * (R / b + 1 / (b * b));
    EXPECT_LE(outside, 1e-4);
    EXPECT_GT(suggested_sim_radius(cfg, -1.0, 1e-6), R);
}

TEST(Simulator, CommonRandomNumbersOrderPolicies) {
    // Adding cached copies can only create holders, so with shared uniforms a
    // pointwise larger policy never loses a NL trial.
    auto cfg = table1_config();
    const auto prof = zipf_popularity(10, 0.8);
    cfg.cache_mm = cfg.cache_mu = 10;
    const CachingPolicy lo{baseline_uc(10, 3), baseline_uc(10, 3)};
    const CachingPolicy hi{baseline_uc(10, 7), baseline_uc(10, 7)};
    const auto so = options(1500, 21, Regime::NoiseLimited, 1500.0);
    EXPECT_LE(estimate_asp(cfg, lo, prof, so).successes, estimate_asp(cfg, hi, prof, so).successes);
}

TEST(Simulator, RejectsBadInput) {
    const auto cfg = table1_config();
    const auto prof = zipf_popularity(10, 0.8);
    EXPECT_THROW(estimate_asp(cfg, uniform(cfg, 9), prof, options(10, 1, Regime::General, 500)),
                 std::invalid_argument);
    EXPECT_THROW(estimate_asp(cfg, uniform(cfg, 10), prof, options(0, 1, Regime::General, 500)),
                 std::invalid_argument);
    std::mt19937_64 rng(1);
    EXPECT_THROW(sample_ppp(-1.0, 10.0, rng), std::invalid_argument);
}
