#pragma once

// Analytical average success probability (ASP) of file delivery.
//
//  * General / interference-limited upper bounds: a binomial expansion of the
//    Gamma-CDF bound over the serving link, times the Laplace functional of the
//    interference from BSs that do not cache the file.
//  * Noise-limited closed forms: the void probability of the thinned,
//    fading-displaced path-loss process of the BSs that cache the file.
//
// Files are 1-based throughout.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "mmcache/association.hpp"
#include "mmcache/channel.hpp"
#include "mmcache/error.hpp"
#include "mmcache/network.hpp"
#include "mmcache/policy.hpp"
#include "mmcache/popularity.hpp"
#include "mmcache/quadrature.hpp"

namespace mmcache {

enum class Regime { NoiseLimited, InterferenceLimited, General, Simulated };

enum class LinkState { Los, Nlos };

inline constexpr LinkState kLinkStates[] = {LinkState::Los, LinkState::Nlos};

/// Conditional serving distance r_x used by the bound expressions.
///
/// MeanNearestNeighbor uses the caching probability of the policy being
/// evaluated. UniformReference fixes it at the uniform placement C / L, so the
/// distance is a per-network constant that does not move with the policy.
struct ServingDistanceModel {
    enum class Mode { Fixed, MeanNearestNeighbor, UniformReference };

    Mode mode = Mode::MeanNearestNeighbor;
    double fixed_mm = 0.0;
    double fixed_mu = 0.0;

    static ServingDistanceModel fixed(double mm, double mu) {
        detail::require(mm > 0.0 && mu > 0.0, "fixed serving distances must be positive");
        return {Mode::Fixed, mm, mu};
    }
    static ServingDistanceModel mean_nearest_neighbor() { return {}; }
    static ServingDistanceModel uniform_reference() { return {Mode::UniformReference, 0.0, 0.0}; }

    static double mean_nn_distance(double density) {
        if (density <= 0.0) return std::numeric_limits<double>::infinity();
        return 0.5 / std::sqrt(density);
    }

    /// Replaces UniformReference by the fixed distances it stands for.
    ServingDistanceModel resolved(const NetworkConfig& cfg, std::size_t catalog_size) const {
        if (mode != Mode::UniformReference) return *this;
        const double L = static_cast<double>(catalog_size);
        const double p_mm = std::min(1.0, cfg.cache_mm / L);
        const double p_mu = std::min(1.0, cfg.cache_mu / L);
        return {Mode::Fixed, mean_nn_distance(cfg.lambda_mm * p_mm), mean_nn_distance(cfg.lambda_mu * p_mu)};
    }

    /// Fixed distance, or the mean nearest-neighbour distance 1 / (2 sqrt(lambda p))
    /// of the BSs caching the file; infinite when nobody caches it.
    double distance(Tier tier, const NetworkConfig& cfg, double caching_probability) const {
        detail::require(mode != Mode::UniformReference, "serving-distance model must be resolved first");
        if (mode == Mode::Fixed) return tier == Tier::MmWave ? fixed_mm : fixed_mu;
        return mean_nn_distance(cfg.density(tier) * caching_probability);
    }

    friend bool operator==(const ServingDistanceModel&, const ServingDistanceModel&) = default;
};

/// Per-file conditional ASP of one tier.
struct NetworkAsp {
    std::vector<double> per_file;
    double total = 0.0;
    bool clamped = false;
};

struct AspReport {
    std::vector<double> per_file;
    double total = 0.0;
    Regime regime = Regime::General;
    Association association{};
    std::optional<double> ci_halfwidth;
    NetworkAsp mm;
    NetworkAsp mu;
    /// True when an alternating-sum bound left [0, 1] and was clipped.
    bool clamped = false;
};

// ---------------------------------------------------------------------------
// Numerical helpers

namespace detail {

/// 1 - (1 + x)^(-m) without cancellation for small x.
inline double one_minus_inverse_power(double x, int m) { return -std::expm1(-m * std::log1p(x)); }

/// Regularized upper incomplete gamma Q(m, x) for integer m >= 1.
inline double regularized_upper_gamma(int m, double x) {
    if (x <= 0.0) return 1.0;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < m; ++k) {
        term *= x / k;
        sum += term;
    }
    // exp(-x) * sum, evaluated in logs to survive large x with large partial sums.
    return std::exp(std::log(sum) - x);
}

inline double binomial(int n, int k) {
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

struct NeumaierSum {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double x) {
        const double t = sum + x;
        compensation += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + compensation; }
};

inline double path_loss_exponent(const NetworkConfig& cfg, LinkState state) {
    return state == LinkState::Los ? cfg.alpha_los : cfg.alpha_nlos;
}

inline double state_probability(LinkState state, double distance, double beta) {
    return state == LinkState::Los ? los_probability(distance, beta) : nlos_probability(distance, beta);
}

inline double finite_scale(double s) { return std::clamp(s, 1e-6, 1e9); }

}  // namespace detail

/// Sum over l = 1..m of C(m, l) (-1)^(l+1) term(l), in ascending l with
/// compensated summation.
template <class Term>
double alternating_binomial_sum(int m, Term&& term) {
    detail::NeumaierSum acc;
    double binom = 1.0;
    for (int l = 1; l <= m; ++l) {
        binom = binom * (m - l + 1) / l;
        const double sign = (l % 2 == 1) ? 1.0 : -1.0;
        acc.add(sign * binom * term(l));
    }
    return acc.value();
}

/// Constant of the Gamma-CDF bound, m (m!)^(-1/m).
inline double bernoulli_constant_A(int m) {
    detail::require(m >= 1, "Nakagami order must be >= 1");
    return m * std::exp(-std::lgamma(m + 1.0) / m);
}

// ---------------------------------------------------------------------------
// Interference exponents

/// Laplace exponent of mmWave interference per unit interferer density:
/// sum over gain classes and interferer link states of
///   int_0^inf (1 - (1 + A l Q G_q r^-alpha_k r_x^alpha_j / (G_x m))^-m) p_k(r) 2 pi p_q r dr.
inline double mm_interference_exponent(double threshold, int l, LinkState serving, double serving_distance,
                                       const NetworkConfig& cfg, const QuadratureSpec& base = {}) {
    detail::require(l >= 1 && l <= cfg.fading_mm.nakagami_order, "binomial index out of range");
    detail::require(threshold >= 0.0, "SINR threshold must be nonnegative");
    detail::require(serving_distance > 0.0, "serving distance must be positive");
    detail::require(cfg.alpha_nlos > 2.0, "NLOS interference integral diverges for alpha <= 2");
    detail::require(cfg.alpha_los > 2.0 || cfg.blockage > 0.0, "LOS interference integral diverges for alpha <= 2");
    if (threshold == 0.0) return 0.0;

    const int m = cfg.fading_mm.nakagami_order;
    const double A = bernoulli_constant_A(m);
    const double beta = cfg.blockage;
    const double s = A * l * threshold *
                     std::pow(serving_distance, detail::path_loss_exponent(cfg, serving)) / cfg.serving_gain();
    const auto classes = effective_gain_distribution(cfg.pattern).merged();

    double total = 0.0;
    for (const auto& cls : classes) {
        const double c = s * cls.gain / m;
        for (LinkState k : kLinkStates) {
            const double alpha = detail::path_loss_exponent(cfg, k);
            auto integrand = [&](double r) {
                if (r == 0.0) return 0.0;
                const double weight = detail::state_probability(k, r, beta);
                if (weight == 0.0) return 0.0;
                const double x = c * std::pow(r, -alpha);
                return 2.0 * std::numbers::pi * r * detail::one_minus_inverse_power(x, m) * weight;
            };
            QuadratureSpec spec = base;
            double scale = std::pow(c, 1.0 / alpha);
            if (k == LinkState::Los && beta > 0.0) scale = std::min(scale, 1.0 / beta);
            spec.scale = detail::finite_scale(scale);
            total += cls.probability * integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), spec).value;
        }
    }
    return total;
}

/// Laplace exponent of muWave interference per unit interferer density:
///   int_0^inf 2 pi r (1 - (1 + A l Q r^-alpha / (r_x^-alpha m))^-m) dr.
inline double mu_interference_exponent(double threshold, int l, double serving_distance, const NetworkConfig& cfg,
                                       const QuadratureSpec& base = {}) {
    detail::require(l >= 1 && l <= cfg.fading_mu.nakagami_order, "binomial index out of range");
    detail::require(threshold >= 0.0, "SINR threshold must be nonnegative");
    detail::require(serving_distance > 0.0, "serving distance must be positive");
    detail::require(cfg.alpha_mu > 2.0, "muWave interference integral diverges for alpha <= 2");
    if (threshold == 0.0) return 0.0;

    const int m = cfg.fading_mu.nakagami_order;
    const double alpha = cfg.alpha_mu;
    const double c = bernoulli_constant_A(m) * l * threshold * std::pow(serving_distance, alpha) / m;
    auto integrand = [&](double r) {
        if (r == 0.0) return 0.0;
        return 2.0 * std::numbers::pi * r * detail::one_minus_inverse_power(c * std::pow(r, -alpha), m);
    };
    QuadratureSpec spec = base;
    spec.scale = detail::finite_scale(std::pow(c, 1.0 / alpha));
    return integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), spec).value;
}

/// Z(i, l) for a file under a policy and serving-distance model.
inline double interference_exponent_mm(std::size_t file, int l, LinkState serving, const NetworkConfig& cfg,
                                       const CachingPolicy& policy, const ServingDistanceModel& sdm,
                                       const QuadratureSpec& spec = {}) {
    const double r = sdm.resolved(cfg, policy.catalog_size()).distance(Tier::MmWave, cfg, policy.probability(Tier::MmWave, file));
    detail::require(std::isfinite(r), "serving distance is undefined when no BS caches the file");
    return mm_interference_exponent(cfg.sinr_threshold(file), l, serving, r, cfg, spec);
}

/// W(i, l) for a file under a policy and serving-distance model.
inline double interference_exponent_mu(std::size_t file, int l, const NetworkConfig& cfg,
                                       const CachingPolicy& policy, const ServingDistanceModel& sdm,
                                       const QuadratureSpec& spec = {}) {
    const double r = sdm.resolved(cfg, policy.catalog_size()).distance(Tier::MuWave, cfg, policy.probability(Tier::MuWave, file));
    detail::require(std::isfinite(r), "serving distance is undefined when no BS caches the file");
    return mu_interference_exponent(cfg.sinr_threshold(file), l, r, cfg, spec);
}

// ---------------------------------------------------------------------------
// Upper bounds (general and interference-limited)

namespace detail {

inline double finish_probability(double value, bool& clamped) {
    if (value < 0.0 || value > 1.0) {
        clamped = true;
        return std::clamp(value, 0.0, 1.0);
    }
    return value;
}

inline double mm_bound_for_file(std::size_t file, double p, bool with_noise, const NetworkConfig& cfg,
                                const ServingDistanceModel& sdm, const QuadratureSpec& spec, bool& clamped) {
    if (p <= 0.0) return 0.0;
    const double r = sdm.distance(Tier::MmWave, cfg, p);
    const int m = cfg.fading_mm.nakagami_order;
    const double A = bernoulli_constant_A(m);
    const double Q = cfg.sinr_threshold(file);
    const double interferers = (1.0 - p) * cfg.lambda_mm;
    const double noise_scale = 1.0 / (cfg.snr_mm() * cfg.serving_gain());
    const double value = alternating_binomial_sum(m, [&](int l) {
        double term = 0.0;
        for (LinkState j : kLinkStates) {
            const double weight = state_probability(j, r, cfg.blockage);
            if (weight == 0.0) continue;
            double exponent = 0.0;
            if (with_noise) exponent += A * l * Q * std::pow(r, path_loss_exponent(cfg, j)) * noise_scale;
            if (interferers > 0.0) exponent += interferers * mm_interference_exponent(Q, l, j, r, cfg, spec);
            term += weight * std::exp(-exponent);
        }
        return term;
    });
    return finish_probability(value, clamped);
}

inline double mu_bound_for_file(std::size_t file, double p, bool with_noise, const NetworkConfig& cfg,
                                const ServingDistanceModel& sdm, const QuadratureSpec& spec, bool& clamped) {
    if (p <= 0.0) return 0.0;
    const double r = sdm.distance(Tier::MuWave, cfg, p);
    const int m = cfg.fading_mu.nakagami_order;
    const double A = bernoulli_constant_A(m);
    const double Q = cfg.sinr_threshold(file);
    const double interferers = (1.0 - p) * cfg.lambda_mu;
    const double value = alternating_binomial_sum(m, [&](int l) {
        double exponent = 0.0;
        if (with_noise) exponent += A * l * Q * std::pow(r, cfg.alpha_mu) / cfg.snr_mu();
        if (interferers > 0.0) exponent += interferers * mu_interference_exponent(Q, l, r, cfg, spec);
        return std::exp(-exponent);
    });
    return finish_probability(value, clamped);
}

template <class PerFile>
NetworkAsp tier_asp(const PopularityProfile& profile, PerFile&& per_file) {
    NetworkAsp out;
    out.per_file.resize(profile.catalog_size());
    NeumaierSum total;
    for (std::size_t i = 1; i <= profile.catalog_size(); ++i) {
        out.per_file[i - 1] = per_file(i, out.clamped);
        total.add(profile.probability(i) * out.per_file[i - 1]);
    }
    out.total = total.value();
    return out;
}

inline void check_inputs(const NetworkConfig& cfg, const CachingPolicy& policy, const PopularityProfile& profile) {
    cfg.validate_for_catalog(profile.catalog_size());
    require(policy.catalog_size() == profile.catalog_size(), "policy and popularity profile differ in catalog size");
    policy.validate(cfg);
}

}  // namespace detail

/// Combines per-tier conditional ASPs with the association probabilities.
inline AspReport asp_total(const NetworkAsp& mm, const NetworkAsp& mu, const Association& association,
                           Regime regime = Regime::General) {
    detail::require(mm.per_file.size() == mu.per_file.size(), "tier reports differ in catalog size");
    AspReport report;
    report.regime = regime;
    report.association = association;
    report.mm = mm;
    report.mu = mu;
    report.per_file.resize(mm.per_file.size());
    for (std::size_t i = 0; i < mm.per_file.size(); ++i)
        report.per_file[i] = association.p_mm * mm.per_file[i] + association.p_mu * mu.per_file[i];
    report.total = association.p_mm * mm.total + association.p_mu * mu.total;
    report.clamped = mm.clamped || mu.clamped;
    return report;
}

inline NetworkAsp mm_upper_bound(const NetworkConfig& cfg, const CachingPolicy& policy,
                                 const PopularityProfile& profile, const ServingDistanceModel& sdm, bool with_noise,
                                 const QuadratureSpec& spec = {}) {
    const auto model = sdm.resolved(cfg, profile.catalog_size());
    return detail::tier_asp(profile, [&](std::size_t i, bool& clamped) {
        return detail::mm_bound_for_file(i, policy.mm[i - 1], with_noise, cfg, model, spec, clamped);
    });
}

inline NetworkAsp mu_upper_bound(const NetworkConfig& cfg, const CachingPolicy& policy,
                                 const PopularityProfile& profile, const ServingDistanceModel& sdm, bool with_noise,
                                 const QuadratureSpec& spec = {}) {
    const auto model = sdm.resolved(cfg, profile.catalog_size());
    return detail::tier_asp(profile, [&](std::size_t i, bool& clamped) {
        return detail::mu_bound_for_file(i, policy.mu[i - 1], with_noise, cfg, model, spec, clamped);
    });
}

/// Upper bound on the ASP with both noise and interference.
inline AspReport asp_general_upper_bound(const NetworkConfig& cfg, const CachingPolicy& policy,
                                         const PopularityProfile& profile, const ServingDistanceModel& sdm,
                                         const QuadratureSpec& spec = {}) {
    detail::check_inputs(cfg, policy, profile);
    return asp_total(mm_upper_bound(cfg, policy, profile, sdm, true, spec),
                     mu_upper_bound(cfg, policy, profile, sdm, true, spec), association_probability(cfg, spec),
                     Regime::General);
}

/// Interference-limited upper bound (noise dropped).
inline AspReport asp_il(const NetworkConfig& cfg, const CachingPolicy& policy, const PopularityProfile& profile,
                        const ServingDistanceModel& sdm, const QuadratureSpec& spec = {}) {
    detail::check_inputs(cfg, policy, profile);
    return asp_total(mm_upper_bound(cfg, policy, profile, sdm, false, spec),
                     mu_upper_bound(cfg, policy, profile, sdm, false, spec), association_probability(cfg, spec),
                     Regime::InterferenceLimited);
}

// ---------------------------------------------------------------------------
// Noise-limited closed forms

/// Z_j(w) = int_0^inf int_0^w exp(-m psi / omega) omega^-(m+1) d omega
///          psi^(delta_j + m - 1) exp(-beta psi^(delta_j / 2)) d psi.
/// The inner integral equals (m psi)^-m Gamma(m, m psi / w) (upper incomplete
/// gamma); the outer one is evaluated in the distance domain psi = r^alpha_j.
inline double nl_displacement_integral(double w, LinkState state, const NetworkConfig& cfg,
                                       const QuadratureSpec& base = {}) {
    detail::require(w >= 0.0, "normalized SNR threshold must be nonnegative");
    if (w == 0.0) return 0.0;
    const int m = cfg.fading_mm.nakagami_order;
    const double alpha = detail::path_loss_exponent(cfg, state);
    const double beta = cfg.blockage;
    // m^-m * Gamma(m) * alpha, the constant in front of r * Q(m, m r^alpha / w) exp(-beta r).
    const double prefactor = alpha * std::exp(std::lgamma(static_cast<double>(m)) - m * std::log(static_cast<double>(m)));
    auto integrand = [&](double r) {
        if (r == 0.0) return 0.0;
        const double decay = std::exp(-beta * r);
        if (decay == 0.0) return 0.0;
        return r * detail::regularized_upper_gamma(m, m * std::pow(r, alpha) / w) * decay;
    };
    QuadratureSpec spec = base;
    double scale = std::pow(w, 1.0 / alpha);
    if (beta > 0.0) scale = std::min(scale, 1.0 / beta);
    spec.scale = detail::finite_scale(scale);
    return prefactor * integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), spec).value;
}

/// Constants of the noise-limited mmWave closed form.
struct NlMmConstants {
    double k_los = 0.0;   // +pi lambda m^m delta_L / Gamma(m)
    double k_nlos = 0.0;  // -pi lambda m^m delta_N / Gamma(m)
    double k_hat = 0.0;   // pi lambda Gamma(delta_N + m) / (m^delta_N Gamma(m))
    double delta_nlos = 0.0;
};

inline NlMmConstants nl_mm_constants(const NetworkConfig& cfg) {
    const double m = cfg.fading_mm.nakagami_order;
    const double pl = std::numbers::pi * cfg.lambda_mm;
    const double log_ratio = m * std::log(m) - std::lgamma(m);  // log(m^m / Gamma(m))
    NlMmConstants k;
    k.delta_nlos = 2.0 / cfg.alpha_nlos;
    k.k_los = pl * std::exp(log_ratio) * (2.0 / cfg.alpha_los);
    k.k_nlos = -pl * std::exp(log_ratio) * k.delta_nlos;
    k.k_hat = pl * std::exp(std::lgamma(k.delta_nlos + m) - k.delta_nlos * std::log(m) - std::lgamma(m));
    return k;
}

/// Per-unit-caching-probability exponent A_i + B_i of the NL mmWave ASP of a file.
inline double nl_mm_exponent(std::size_t file, const NetworkConfig& cfg, const QuadratureSpec& spec = {}) {
    if (cfg.lambda_mm == 0.0) return 0.0;
    const double w = cfg.snr_mm() * cfg.serving_gain() / cfg.sinr_threshold(file);
    const auto k = nl_mm_constants(cfg);
    const double A = k.k_los * nl_displacement_integral(w, LinkState::Los, cfg, spec) +
                     k.k_nlos * nl_displacement_integral(w, LinkState::Nlos, cfg, spec);
    const double B = k.k_hat * std::pow(w, k.delta_nlos);
    return A + B;
}

/// Per-unit-caching-probability exponent k~ T^_i of the NL muWave ASP of a file.
/// Uses E[X^delta] of the unit-mean Gamma fading, which is Gamma(1 + delta) for m = 1.
inline double nl_mu_exponent(std::size_t file, const NetworkConfig& cfg) {
    const double m = cfg.fading_mu.nakagami_order;
    const double delta = 2.0 / cfg.alpha_mu;
    const double k_tilde =
        std::numbers::pi * cfg.lambda_mu * std::exp(std::lgamma(delta + m) - std::lgamma(m) - delta * std::log(m));
    return k_tilde * std::pow(cfg.snr_mu() / cfg.sinr_threshold(file), delta);
}

inline NetworkAsp asp_nl_mm(const NetworkConfig& cfg, const CachingPolicy& policy, const PopularityProfile& profile,
                            const QuadratureSpec& spec = {}) {
    detail::check_inputs(cfg, policy, profile);
    return detail::tier_asp(profile, [&](std::size_t i, bool&) {
        const double p = policy.mm[i - 1];
        return p <= 0.0 ? 0.0 : -std::expm1(-p * nl_mm_exponent(i, cfg, spec));
    });
}

inline NetworkAsp asp_nl_mu(const NetworkConfig& cfg, const CachingPolicy& policy, const PopularityProfile& profile) {
    detail::check_inputs(cfg, policy, profile);
    return detail::tier_asp(profile, [&](std::size_t i, bool&) {
        const double p = policy.mu[i - 1];
        return p <= 0.0 ? 0.0 : -std::expm1(-p * nl_mu_exponent(i, cfg));
    });
}

/// Noise-limited ASP of both tiers mixed by association.
inline AspReport asp_nl(const NetworkConfig& cfg, const CachingPolicy& policy, const PopularityProfile& profile,
                        const QuadratureSpec& spec = {}) {
    return asp_total(asp_nl_mm(cfg, policy, profile, spec), asp_nl_mu(cfg, policy, profile),
                     association_probability(cfg, spec), Regime::NoiseLimited);
}

/// Analytic ASP for the requested regime.
inline AspReport analytic_asp(Regime regime, const NetworkConfig& cfg, const CachingPolicy& policy,
                              const PopularityProfile& profile, const ServingDistanceModel& sdm,
                              const QuadratureSpec& spec = {}) {
    switch (regime) {
        case Regime::NoiseLimited: return asp_nl(cfg, policy, profile, spec);
        case Regime::InterferenceLimited: return asp_il(cfg, policy, profile, sdm, spec);
        case Regime::General: return asp_general_upper_bound(cfg, policy, profile, sdm, spec);
        case Regime::Simulated: break;
    }
    throw std::invalid_argument("no analytic expression for a simulated regime");
}

}  // namespace mmcache
