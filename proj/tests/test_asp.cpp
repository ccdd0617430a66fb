#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "mmcache/asp.hpp"
#include "mmcache/optimizer.hpp"

using namespace mmcache;
using boost::math::quadrature::exp_sinh;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Z(w) straight from its double-integral definition: inner over omega in
// (0, w] in the log domain, outer over psi = r^alpha carried out in r. Both
// integrands are negligible (below e^-700) outside the windows used here.
double z_two_dimensional(double w, double alpha, double beta, int m) {
    const double delta = 2.0 / alpha;
    const double cut = 700.0;
    auto outer = [&](double r) {
        if (r == 0.0) return 0.0;
        const double psi = std::pow(r, alpha);
        const double lo = std::log(m * psi / cut);
        const double hi = std::log(w);
        if (lo >= hi) return 0.0;
        auto inner = [&](double x) {
            return std::exp(-m * psi * std::exp(-x) - m * x + (delta + m - 1) * std::log(psi));
        };
        const double I = gauss_kronrod<double, 61>::integrate(inner, lo, hi, 10, 1e-11);
        return I * std::exp(-beta * r) * alpha * std::pow(r, alpha - 1);
    };
    double rmax = std::pow(cut * w / m, 1.0 / alpha);
    if (beta > 0.0) rmax = std::min(rmax, cut / beta);
    return gauss_kronrod<double, 61>::integrate(outer, 0.0, rmax, 15, 1e-10);
}

// Expected number of caching BSs (per unit caching probability) whose SNR
// exceeds the threshold, which is the exponent of the NL success probability.
double coverage_number_mm(std::size_t file, const NetworkConfig& c) {
    const int m = c.fading_mm.nakagami_order;
    const double Q = c.sinr_threshold(file);
    auto f = [&](double r) {
        if (r == 0.0) return 0.0;
        const double g = c.snr_mm() * c.serving_gain();
        const double pl = std::exp(-c.blockage * r);
        const double los = boost::math::gamma_q(m, m * Q * std::pow(r, c.alpha_los) / g);
        const double nlos = boost::math::gamma_q(m, m * Q * std::pow(r, c.alpha_nlos) / g);
        return 2 * std::numbers::pi * r * (pl * los + (1 - pl) * nlos);
    };
    return c.lambda_mm * exp_sinh<double>().integrate(f, 0.0, kInf, 1e-12);
}

double coverage_number_mu(std::size_t file, const NetworkConfig& c) {
    const int m = c.fading_mu.nakagami_order;
    const double Q = c.sinr_threshold(file);
    auto f = [&](double r) {
        return 2 * std::numbers::pi * r * boost::math::gamma_q(m, m * Q * std::pow(r, c.alpha_mu) / c.snr_mu());
    };
    return c.lambda_mu * exp_sinh<double>().integrate(f, 0.0, kInf, 1e-12);
}

// Monte Carlo of the conditional success probability that the bounds refer
// to: serving BS at distance r with LOS probability p_L(r), interferers are
// the non-caching BSs of the tier.
struct Conditional {
    double mean;
    double ci;
};

Conditional conditional_mm(const NetworkConfig& c, double p, double r, bool noise, int trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto gains = effective_gain_distribution(c.pattern);
    std::discrete_distribution<int> cls({gains.entries[0].probability, gains.entries[1].probability,
                                         gains.entries[2].probability, gains.entries[3].probability});
    std::gamma_distribution<double> h(c.fading_mm.nakagami_order, 1.0 / c.fading_mm.nakagami_order);
    const double R = 3000.0;
    std::poisson_distribution<int> count((1 - p) * c.lambda_mm * std::numbers::pi * R * R);
    const double Q = c.sinr_threshold(1);
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        const bool los = u(rng) < std::exp(-c.blockage * r);
        const double s = c.serving_gain() * h(rng) * std::pow(r, -(los ? c.alpha_los : c.alpha_nlos));
        double I = noise ? 1.0 / c.snr_mm() : 0.0;
        const int n = count(rng);
        for (int k = 0; k < n; ++k) {
            const double d = R * std::sqrt(u(rng));
            const bool l = u(rng) < std::exp(-c.blockage * d);
            I += gains.entries[cls(rng)].gain * h(rng) * std::pow(d, -(l ? c.alpha_los : c.alpha_nlos));
        }
        hits += s > Q * I;
    }
    const double m = double(hits) / trials;
    return {m, 1.96 * std::sqrt(m * (1 - m) / trials)};
}

Conditional conditional_mu(const NetworkConfig& c, double p, double r, bool noise, int trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::gamma_distribution<double> h(c.fading_mu.nakagami_order, 1.0 / c.fading_mu.nakagami_order);
    const double R = 5000.0;
    std::poisson_distribution<int> count((1 - p) * c.lambda_mu * std::numbers::pi * R * R);
    const double Q = c.sinr_threshold(1);
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        const double s = h(rng) * std::pow(r, -c.alpha_mu);
        double I = noise ? 1.0 / c.snr_mu() : 0.0;
        const int n = count(rng);
        for (int k = 0; k < n; ++k) I += h(rng) * std::pow(R * std::sqrt(u(rng)), -c.alpha_mu);
        hits += s > Q * I;
    }
    const double m = double(hits) / trials;
    return {m, 1.96 * std::sqrt(m * (1 - m) / trials)};
}

CachingPolicy single_file(double p_mm, double p_mu) { return {{p_mm}, {p_mu}}; }

}  // namespace

TEST(AspKernels, DisplacementIntegralMatchesDoubleIntegral) {
    auto cfg = table1_config();
    for (double beta : {0.002, 0.008})
        for (LinkState s : kLinkStates)
            for (double w : {1e2, 1e4, 1e6, 7.6e7, 1e9}) {
                cfg.blockage = beta;
                const double alpha = s == LinkState::Los ? cfg.alpha_los : cfg.alpha_nlos;
                const double ours = nl_displacement_integral(w, s, cfg);
                const double ref = z_two_dimensional(w, alpha, beta, cfg.fading_mm.nakagami_order);
                EXPECT_NEAR(ours, ref, 1e-7 * std::abs(ref)) << "beta=" << beta << " w=" << w;
            }
}

TEST(AspKernels, MuInterferenceClosedFormRayleighAlpha4) {
    auto cfg = table1_config();
    cfg.alpha_mu = 4.0;
    cfg.fading_mu = FadingModel{1};
    for (double Q : {0.057, 0.74, 3.0})
        for (double r : {10.0, 100.0, 564.0}) {
            const double c = Q * std::pow(r, 4.0);
            const double closed = std::numbers::pi * std::numbers::pi * std::sqrt(c) / 2.0;
            EXPECT_NEAR(mu_interference_exponent(Q, 1, r, cfg), closed, 1e-6 * closed);
        }
}

TEST(AspKernels, BinomialHelpers) {
    for (int m : {1, 2, 5, 10, 20})
        EXPECT_NEAR(alternating_binomial_sum(m, [](int) { return 1.0; }), 1.0, 1e-12);
    // 1 - (1 - x)^m expanded.
    const double x = 0.3;
    EXPECT_NEAR(alternating_binomial_sum(10, [&](int l) { return std::pow(x, l); }), 1 - std::pow(1 - x, 10), 1e-12);
    EXPECT_DOUBLE_EQ(bernoulli_constant_A(1), 1.0);
    EXPECT_NEAR(bernoulli_constant_A(10), 10 * std::pow(3628800.0, -0.1), 1e-12);
    EXPECT_NEAR(detail::regularized_upper_gamma(10, 7.5), boost::math::gamma_q(10, 7.5), 1e-14);
    EXPECT_NEAR(detail::regularized_upper_gamma(64, 300.0), boost::math::gamma_q(64, 300.0),
                1e-10 * boost::math::gamma_q(64, 300.0));
}

TEST(AspNoiseLimited, ExponentsMatchCoverageNumber) {
    for (auto cfg : {table1_config(), il_config(), table1_config(GainReading::Decibel)}) {
        EXPECT_NEAR(nl_mm_exponent(1, cfg), coverage_number_mm(1, cfg), 1e-7 * coverage_number_mm(1, cfg));
        EXPECT_NEAR(nl_mu_exponent(1, cfg), coverage_number_mu(1, cfg), 1e-7 * coverage_number_mu(1, cfg));
    }
    auto cfg = table1_config();
    cfg.fading_mu = FadingModel{3};
    EXPECT_NEAR(nl_mu_exponent(1, cfg), coverage_number_mu(1, cfg), 1e-7 * coverage_number_mu(1, cfg));
}

TEST(AspNoiseLimited, TotalFromExponents) {
    const auto cfg = table1_config();
    const auto prof = zipf_popularity(10, 0.8);
    const CachingPolicy uc{baseline_uc(10, 5), baseline_uc(10, 6)};
    const auto rep = asp_nl(cfg, uc, prof);
    const double am = coverage_number_mm(1, cfg), au = coverage_number_mu(1, cfg);
    const auto a = association_probability(cfg);
    const double expect = a.p_mm * (1 - std::exp(-0.5 * am)) + a.p_mu * (1 - std::exp(-0.6 * au));
    EXPECT_NEAR(rep.total, expect, 1e-7);
    EXPECT_EQ(rep.regime, Regime::NoiseLimited);
}

TEST(AspNoiseLimited, MonotoneInCachingProbability) {
    const auto cfg = table1_config();
    const auto prof = zipf_popularity(1, 0.0);
    double last = -1.0;
    for (double p : {0.0, 0.1, 0.4, 0.9, 1.0}) {
        auto c = cfg;
        c.cache_mm = c.cache_mu = 1;
        const double v = asp_nl(c, single_file(p, p), prof).total;
        EXPECT_GE(v, last);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        last = v;
    }
}

TEST(AspBounds, RayleighMuBoundIsExactConditional) {
    // With m = 1 the gamma-CDF inequality is an equality, so the muWave
    // expression must reproduce the conditional simulation.
    auto cfg = il_config();
    cfg.cache_mm = cfg.cache_mu = 1;
    const auto prof = zipf_popularity(1, 0.0);
    for (double r : {60.0, 150.0}) {
        const auto sdm = ServingDistanceModel::fixed(50.0, r);
        for (bool noise : {false, true}) {
            const auto b = mu_upper_bound(cfg, single_file(0.3, 0.3), prof, sdm, noise).total;
            const auto sim = conditional_mu(cfg, 0.3, r, noise, 20000, 17);
            EXPECT_NEAR(b, sim.mean, 4 * sim.ci / 1.96 + 2e-3) << r << " " << noise;
        }
    }
}

TEST(AspBounds, MmBoundDominatesConditionalSimulation) {
    for (auto cfg : {table1_config(), il_config()}) {
        cfg.cache_mm = cfg.cache_mu = 1;
        const auto prof = zipf_popularity(1, 0.0);
        for (double r : {30.0, 100.0}) {
            const auto sdm = ServingDistanceModel::fixed(r, 100.0);
            for (bool noise : {false, true}) {
                const double b = mm_upper_bound(cfg, single_file(0.5, 0.5), prof, sdm, noise).total;
                const auto sim = conditional_mm(cfg, 0.5, r, noise, 4000, 23);
                EXPECT_GE(b, sim.mean - 3 * sim.ci) << "r=" << r << " noise=" << noise;
            }
        }
    }
}

TEST(AspBounds, RangeAndOrdering) {
    const auto prof = zipf_popularity(10, 0.8);
    for (auto cfg : {table1_config(), il_config()}) {
        const CachingPolicy uc{baseline_uc(10, 5), baseline_uc(10, 6)};
        for (auto sdm : {ServingDistanceModel::mean_nearest_neighbor(), ServingDistanceModel::uniform_reference(),
                         ServingDistanceModel::fixed(40.0, 200.0)}) {
            const auto g = asp_general_upper_bound(cfg, uc, prof, sdm);
            const auto il = asp_il(cfg, uc, prof, sdm);
            EXPECT_GE(g.total, 0.0);
            EXPECT_LE(il.total, 1.0);
            // Dropping the noise can only help.
            EXPECT_GE(il.total, g.total - 1e-12);
            for (double v : il.per_file) EXPECT_TRUE(v >= 0.0 && v <= 1.0);
        }
    }
}

TEST(AspBounds, UniformReferenceEqualsMeanNnAtUniformPlacement) {
    const auto cfg = il_config();
    const auto prof = zipf_popularity(10, 1.0);
    const CachingPolicy uc{baseline_uc(10, 5), baseline_uc(10, 6)};
    EXPECT_NEAR(asp_il(cfg, uc, prof, ServingDistanceModel::mean_nearest_neighbor()).total,
                asp_il(cfg, uc, prof, ServingDistanceModel::uniform_reference()).total, 1e-14);
    const auto fixed = ServingDistanceModel::uniform_reference().resolved(cfg, 10);
    EXPECT_EQ(fixed.mode, ServingDistanceModel::Mode::Fixed);
    EXPECT_NEAR(fixed.fixed_mm, 0.5 / std::sqrt(5e-5 * 0.5), 1e-12);
}

TEST(AspBounds, UncachedFileHasZeroAsp) {
    auto cfg = table1_config();
    const auto prof = zipf_popularity(10, 0.8);
    CachingPolicy p{baseline_uc(10, 5), baseline_uc(10, 6)};
    p.mm[9] = 0.0;
    p.mu[9] = 0.0;
    const auto sdm = ServingDistanceModel::mean_nearest_neighbor();
    EXPECT_EQ(asp_il(cfg, p, prof, sdm).per_file[9], 0.0);
    EXPECT_EQ(asp_nl(cfg, p, prof).per_file[9], 0.0);
}

TEST(AspBounds, RejectsInfeasiblePolicy) {
    const auto cfg = table1_config();
    const auto prof = zipf_popularity(10, 0.8);
    CachingPolicy p{std::vector<double>(10, 0.6), baseline_uc(10, 6)};
    EXPECT_THROW(asp_nl(cfg, p, prof), std::invalid_argument);
    EXPECT_THROW(analytic_asp(Regime::Simulated, cfg, {baseline_uc(10, 5), baseline_uc(10, 6)}, prof, {}),
                 std::invalid_argument);
}
