#pragma once

// Association of the typical user to the mmWave or muWave tier by least
// biased path loss, with blockage-aware counting of mmWave BSs.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mmcache/error.hpp"
#include "mmcache/network.hpp"
#include "mmcache/quadrature.hpp"

namespace mmcache {

namespace detail {

/// Integral of r * exp(-beta r) over [0, d], accurate for small beta * d.
inline double los_disk_integral(double d, double beta) {
    if (std::isinf(d)) return beta > 0.0 ? 1.0 / (beta * beta) : std::numeric_limits<double>::infinity();
    const double x = beta * d;
    if (x < 0.25) {
        // d^2 * sum_k (-x)^k / (k! (k + 2))
        double term = 1.0, sum = 0.5;
        for (int k = 1; k < 30; ++k) {
            term *= -x / k;
            sum += term / (k + 2);
        }
        return d * d * sum;
    }
    return (-std::expm1(-x) - x * std::exp(-x)) / (beta * beta);
}

}  // namespace detail

/// Biased received power scale of the mmWave serving link, P_m G^M G^M B_m.
inline double mm_biased_power(const NetworkConfig& cfg) {
    return cfg.power_mm * cfg.serving_gain() * cfg.effective_bias_mm();
}

inline double mu_biased_power(const NetworkConfig& cfg) { return cfg.power_mu * cfg.effective_bias_mu(); }

/// Expected number of mmWave BSs whose biased path loss d^alpha / (P_m G B_m)
/// does not exceed `pathloss`. LOS links use alpha_L, NLOS links alpha_N.
inline double mm_intensity_measure(double pathloss, const NetworkConfig& cfg) {
    detail::require(pathloss >= 0.0, "path-loss threshold must be nonnegative");
    if (pathloss == 0.0 || cfg.lambda_mm == 0.0) return 0.0;
    if (std::isinf(pathloss)) return std::numeric_limits<double>::infinity();
    const double scaled = pathloss * mm_biased_power(cfg);
    const double d_los = std::pow(scaled, 1.0 / cfg.alpha_los);
    const double d_nlos = std::pow(scaled, 1.0 / cfg.alpha_nlos);
    const double beta = cfg.blockage;
    const double los = detail::los_disk_integral(d_los, beta);
    const double nlos = 0.5 * d_nlos * d_nlos - detail::los_disk_integral(d_nlos, beta);
    return 2.0 * std::numbers::pi * cfg.lambda_mm * (los + nlos);
}

/// CDF of the least biased path loss over the mmWave tier.
inline double least_pathloss_cdf(double pathloss, const NetworkConfig& cfg) {
    return -std::expm1(-mm_intensity_measure(pathloss, cfg));
}

struct Association {
    double p_mm = 1.0;
    double p_mu = 0.0;
};

/// Probability that the typical user attaches to the muWave tier: the nearest
/// muWave BS beats every mmWave BS in biased path loss.
inline double association_prob_mu(const NetworkConfig& cfg, const QuadratureSpec& base = {}) {
    cfg.validate();
    const double lambda = cfg.lambda_mu;
    if (lambda == 0.0) return 0.0;
    const double mu_power = mu_biased_power(cfg);
    auto integrand = [&](double r) {
        if (r == 0.0) return 0.0;
        const double rayleigh = 2.0 * std::numbers::pi * lambda * r * std::exp(-std::numbers::pi * lambda * r * r);
        if (rayleigh == 0.0) return 0.0;
        return rayleigh * std::exp(-mm_intensity_measure(std::pow(r, cfg.alpha_mu) / mu_power, cfg));
    };
    QuadratureSpec spec = base;
    spec.scale = 1.0 / std::sqrt(std::numbers::pi * lambda);
    const double p = integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), spec).value;
    return std::clamp(p, 0.0, 1.0);
}

inline Association association_probability(const NetworkConfig& cfg, const QuadratureSpec& spec = {}) {
    const double p_mu = association_prob_mu(cfg, spec);
    return {1.0 - p_mu, p_mu};
}

}  // namespace mmcache
