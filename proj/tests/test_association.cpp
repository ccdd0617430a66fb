#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "mmcache/association.hpp"
#include "mmcache/simulator.hpp"

using namespace mmcache;
using boost::math::quadrature::gauss_kronrod;

namespace {

// Mean number of mmWave BSs with biased path loss below t, by direct integration.
double oracle_measure(double t, const NetworkConfig& c) {
    const double scaled = t * c.power_mm * c.serving_gain() * c.effective_bias_mm();
    const double dl = std::pow(scaled, 1 / c.alpha_los), dn = std::pow(scaled, 1 / c.alpha_nlos);
    auto los = [&](double r) { return r * std::exp(-c.blockage * r); };
    auto nlos = [&](double r) { return r * -std::expm1(-c.blockage * r); };
    const double a = gauss_kronrod<double, 61>::integrate(los, 0.0, dl, 20, 1e-13);
    const double b = gauss_kronrod<double, 61>::integrate(nlos, 0.0, dn, 20, 1e-13);
    return 2 * std::numbers::pi * c.lambda_mm * (a + b);
}

double oracle_p_mu(const NetworkConfig& c) {
    auto f = [&](double r) {
        const double t = std::pow(r, c.alpha_mu) / (c.power_mu * c.effective_bias_mu());
        return 2 * std::numbers::pi * c.lambda_mu * r * std::exp(-std::numbers::pi * c.lambda_mu * r * r) *
               std::exp(-oracle_measure(t, c));
    };
    const double scale = 1 / std::sqrt(std::numbers::pi * c.lambda_mu);
    return gauss_kronrod<double, 61>::integrate(f, 0.0, 12 * scale, 25, 1e-12);
}

}  // namespace

TEST(Association, IntensityMeasureMatchesOracle) {
    const auto cfg = table1_config();
    for (double t : {1e-6, 1e-3, 1.0, 1e3, 1e6, 1e9})
        EXPECT_NEAR(mm_intensity_measure(t, cfg), oracle_measure(t, cfg), 1e-9 * oracle_measure(t, cfg) + 1e-15) << t;
}

TEST(Association, SmallDistanceSeriesIsContinuous) {
    // The series branch and the closed form meet at beta d = 0.25.
    const double b = 0.008, d = 0.25 / b;
    EXPECT_NEAR(detail::los_disk_integral(d * (1 - 1e-12), b), detail::los_disk_integral(d * (1 + 1e-12), b),
                1e-9 * d * d);
}

TEST(Association, ProbabilityMatchesOracle) {
    for (auto cfg : {table1_config(), il_config()}) {
        const auto a = association_probability(cfg);
        EXPECT_NEAR(a.p_mu, oracle_p_mu(cfg), 1e-8);
        EXPECT_EQ(a.p_mm + a.p_mu, 1.0);
    }
    auto cfg = table1_config();
    cfg.bias_mu = 1e4;
    EXPECT_NEAR(association_prob_mu(cfg), oracle_p_mu(cfg), 1e-8);
}

TEST(Association, DegenerateDensities) {
    auto cfg = table1_config();
    cfg.lambda_mm = 0.0;
    EXPECT_NEAR(association_prob_mu(cfg), 1.0, 1e-12);
    cfg = table1_config();
    cfg.lambda_mu = 0.0;
    EXPECT_EQ(association_prob_mu(cfg), 0.0);
}

TEST(Association, MonotoneInBiasAndDensity) {
    auto cfg = table1_config();
    double last = -1.0;
    for (double b : {0.1, 1.0, 1e2, 1e4, 1e6}) {
        cfg.bias_mu = b;
        const double p = association_prob_mu(cfg);
        EXPECT_GE(p, last);
        last = p;
    }
    cfg = table1_config();
    last = 2.0;
    for (double l : {1e-6, 1e-5, 1e-4, 1e-3}) {
        cfg.lambda_mm = l;
        const double p = association_prob_mu(cfg);
        EXPECT_LE(p, last);
        last = p;
    }
}

TEST(Association, AgreesWithSimulation) {
    auto cfg = table1_config();
    cfg.bias_mu = 1e7;  // makes the muWave tier matter so the check has power
    SimOptions so;
    so.trials = 20000;
    so.seed = 9;
    so.radius = suggested_sim_radius(cfg);
    const auto est = estimate_association(cfg, so);
    const double p = association_prob_mu(cfg);
    EXPECT_GT(p, 0.1);
    EXPECT_NEAR(est.mean, p, 4 * std::sqrt(p * (1 - p) / so.trials) + 1e-3);
}
