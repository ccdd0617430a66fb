#pragma once

// Monte Carlo oracle: the typical user sits at the origin, BSs form PPPs in a
// disk around it, and each trial evaluates one request against one sampled
// network.
//
// Every trial draws from its own generator seeded by (seed, trial index), so
// results do not depend on the worker count, and cache membership comes from
// a counter hash of (BS key, file) so that two policies see the same network,
// the same request and the same coupled uniforms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmcache/asp.hpp"
#include "mmcache/channel.hpp"
#include "mmcache/error.hpp"
#include "mmcache/network.hpp"
#include "mmcache/policy.hpp"
#include "mmcache/popularity.hpp"

namespace mmcache {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the generator used by one trial.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    return splitmix64(splitmix64(seed) ^ splitmix64(trial + 0x632be59bd9b4e019ULL));
}

/// Uniform in [0, 1) attached to a (BS, file) pair.
inline double cache_uniform(std::uint64_t key, std::size_t file) {
    return (splitmix64(key ^ splitmix64(file)) >> 11) * 0x1.0p-53;
}

struct Point {
    double x = 0.0;
    double y = 0.0;
    double norm() const { return std::hypot(x, y); }
};

/// Homogeneous PPP of the given density restricted to the disk of radius R.
template <class Rng>
std::vector<Point> sample_ppp(double density, double radius, Rng& rng) {
    detail::require(density >= 0.0 && std::isfinite(density), "density must be finite and nonnegative");
    detail::require(radius > 0.0, "radius must be positive");
    std::vector<Point> pts;
    if (density == 0.0) return pts;
    std::poisson_distribution<long long> count(density * std::numbers::pi * radius * radius);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const long long n = count(rng);
    pts.reserve(static_cast<std::size_t>(n));
    for (long long k = 0; k < n; ++k) {
        const double r = radius * std::sqrt(u(rng));
        const double phi = 2.0 * std::numbers::pi * u(rng);
        pts.push_back({r * std::cos(phi), r * std::sin(phi)});
    }
    return pts;
}

/// Independent per-BS caching: entry [b][i] tells whether BS b holds file i + 1.
template <class Rng>
std::vector<std::vector<bool>> assign_caches(std::size_t bs_count, const std::vector<double>& p, Rng& rng) {
    for (double v : p) detail::require(v >= 0.0 && v <= 1.0, "caching probabilities must lie in [0, 1]");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<bool>> cached(bs_count, std::vector<bool>(p.size()));
    for (auto& bs : cached)
        for (std::size_t i = 0; i < p.size(); ++i) bs[i] = u(rng) < p[i];
    return cached;
}

/// r^-alpha with exact shortcuts for the exponents that occur in practice.
inline double pathloss_gain(double r, double alpha) {
    if (alpha == 2.0) return 1.0 / (r * r);
    if (alpha == 4.0) return 1.0 / ((r * r) * (r * r));
    if (alpha == 3.5) return 1.0 / (r * r * r * std::sqrt(r));
    if (alpha == 3.0) return 1.0 / (r * r * r);
    return std::pow(r, -alpha);
}

struct MmBaseStation {
    Point position;
    double distance = 0.0;
    bool los = true;
    double fading = 1.0;
    int gain_class = 0;  // index into GainDistribution::entries, used when interfering
    double pathloss = 0.0;  // r^-alpha for the drawn link state
    std::uint64_t cache_key = 0;

    bool caches(std::size_t file, const CachingPolicy& policy) const {
        return cache_uniform(cache_key, file) < policy.mm[file - 1];
    }
};

struct MuBaseStation {
    Point position;
    double distance = 0.0;
    double fading = 1.0;
    double pathloss = 0.0;
    std::uint64_t cache_key = 0;

    bool caches(std::size_t file, const CachingPolicy& policy) const {
        return cache_uniform(cache_key, file) < policy.mu[file - 1];
    }
};

struct PppRealization {
    std::vector<MmBaseStation> mm_bs;
    std::vector<MuBaseStation> mu_bs;
    double radius = 0.0;
    std::uint64_t seed = 0;  // seed of the generator that drew it
};

template <class Rng>
PppRealization sample_realization(const NetworkConfig& cfg, double radius, Rng& rng) {
    PppRealization out;
    out.radius = radius;
    const auto gains = effective_gain_distribution(cfg.pattern);
    std::discrete_distribution<int> gain_class({gains.entries[0].probability, gains.entries[1].probability,
                                                gains.entries[2].probability, gains.entries[3].probability});
    std::gamma_distribution<double> fading_mm(cfg.fading_mm.nakagami_order, 1.0 / cfg.fading_mm.nakagami_order);
    std::gamma_distribution<double> fading_mu(cfg.fading_mu.nakagami_order, 1.0 / cfg.fading_mu.nakagami_order);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    for (const auto& pt : sample_ppp(cfg.lambda_mm, radius, rng)) {
        MmBaseStation bs;
        bs.position = pt;
        bs.distance = pt.norm();
        bs.los = u(rng) < std::exp(-cfg.blockage * bs.distance);
        bs.fading = fading_mm(rng);
        bs.gain_class = gain_class(rng);
        bs.pathloss = pathloss_gain(bs.distance, bs.los ? cfg.alpha_los : cfg.alpha_nlos);
        bs.cache_key = rng();
        out.mm_bs.push_back(bs);
    }
    for (const auto& pt : sample_ppp(cfg.lambda_mu, radius, rng)) {
        MuBaseStation bs;
        bs.position = pt;
        bs.distance = pt.norm();
        bs.fading = fading_mu(rng);
        bs.pathloss = pathloss_gain(bs.distance, cfg.alpha_mu);
        bs.cache_key = rng();
        out.mu_bs.push_back(bs);
    }
    return out;
}

/// Which network serves the request.
enum class NetworkSelection { Associated, MmOnly, MuOnly };

/// How the serving BS is picked among the holders of the file.
enum class ServingRule { InstantaneousPower, AveragePower };

struct SimOptions {
    Regime regime = Regime::General;
    NetworkSelection selection = NetworkSelection::Associated;
    ServingRule serving = ServingRule::InstantaneousPower;
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    /// Disk radius; 0 uses cfg.radius.
    double radius = 0.0;
    /// Optional JSON-lines dump of every trial.
    std::ostream* dump = nullptr;
};

struct SimEstimate {
    double mean = 0.0;
    double ci_halfwidth = 0.0;
    std::size_t n_trials = 0;
    std::size_t successes = 0;
    Regime regime = Regime::Simulated;
};

inline SimEstimate make_estimate(std::size_t successes, std::size_t n, Regime regime) {
    SimEstimate e;
    e.n_trials = n;
    e.successes = successes;
    e.regime = regime;
    if (n == 0) return e;
    e.mean = static_cast<double>(successes) / n;
    e.ci_halfwidth = 1.96 * std::sqrt(e.mean * (1.0 - e.mean) / n);
    return e;
}

// ---------------------------------------------------------------------------
// Per-realization evaluation

/// Least biased path loss over the mmWave BSs of a realization (inf if none).
inline double min_mm_pathloss(const PppRealization& net, const NetworkConfig& cfg) {
    double strongest = 0.0;
    for (const auto& bs : net.mm_bs) strongest = std::max(strongest, bs.pathloss);
    return strongest > 0.0 ? 1.0 / (strongest * mm_biased_power(cfg)) : std::numeric_limits<double>::infinity();
}

inline double min_mu_pathloss(const PppRealization& net, const NetworkConfig& cfg) {
    double strongest = 0.0;
    for (const auto& bs : net.mu_bs) strongest = std::max(strongest, bs.pathloss);
    return strongest > 0.0 ? 1.0 / (strongest * mu_biased_power(cfg)) : std::numeric_limits<double>::infinity();
}

/// Tier chosen by least biased path loss; nullopt when the disk is empty.
inline std::optional<Tier> associate(const PppRealization& net, const NetworkConfig& cfg) {
    const double mm = min_mm_pathloss(net, cfg);
    const double mu = min_mu_pathloss(net, cfg);
    if (std::isinf(mm) && std::isinf(mu)) return std::nullopt;
    return mu < mm ? Tier::MuWave : Tier::MmWave;
}

struct RequestOutcome {
    bool success = false;
    std::optional<Tier> tier;
    double sinr = 0.0;
    std::optional<std::size_t> serving;  // index into the tier's BS list
};

inline RequestOutcome evaluate_request(const PppRealization& net, std::size_t file, const NetworkConfig& cfg,
                                       const CachingPolicy& policy, Regime regime,
                                       NetworkSelection selection = NetworkSelection::Associated,
                                       ServingRule rule = ServingRule::InstantaneousPower) {
    RequestOutcome out;
    switch (selection) {
        case NetworkSelection::Associated: out.tier = associate(net, cfg); break;
        case NetworkSelection::MmOnly: out.tier = Tier::MmWave; break;
        case NetworkSelection::MuOnly: out.tier = Tier::MuWave; break;
    }
    if (!out.tier) return out;
    const bool with_noise = regime != Regime::InterferenceLimited;
    const bool with_interference = regime != Regime::NoiseLimited;
    const double threshold = cfg.sinr_threshold(file);

    double signal = 0.0, interference = 0.0, noise = 0.0;
    if (*out.tier == Tier::MmWave) {
        const auto gains = effective_gain_distribution(cfg.pattern);
        const double G = cfg.serving_gain();
        double best = -1.0;
        for (std::size_t b = 0; b < net.mm_bs.size(); ++b) {
            const auto& bs = net.mm_bs[b];
            const double pl = bs.pathloss;
            if (bs.caches(file, policy)) {
                const double score = cfg.power_mm * G * pl * (rule == ServingRule::InstantaneousPower ? bs.fading : 1.0);
                if (score > best) {
                    best = score;
                    out.serving = b;
                }
            } else if (with_interference) {
                interference += cfg.power_mm * gains.entries[bs.gain_class].gain * bs.fading * pl;
            }
        }
        if (!out.serving) return out;
        const auto& s = net.mm_bs[*out.serving];
        signal = cfg.power_mm * G * s.fading * s.pathloss;
        noise = cfg.noise_mm;
    } else {
        double best = -1.0;
        for (std::size_t b = 0; b < net.mu_bs.size(); ++b) {
            const auto& bs = net.mu_bs[b];
            const double pl = bs.pathloss;
            if (bs.caches(file, policy)) {
                const double score = cfg.power_mu * pl * (rule == ServingRule::InstantaneousPower ? bs.fading : 1.0);
                if (score > best) {
                    best = score;
                    out.serving = b;
                }
            } else if (with_interference) {
                interference += cfg.power_mu * bs.fading * pl;
            }
        }
        if (!out.serving) return out;
        const auto& s = net.mu_bs[*out.serving];
        signal = cfg.power_mu * s.fading * s.pathloss;
        noise = cfg.noise_mu;
    }
    const double denominator = (with_noise ? noise : 0.0) + interference;
    out.sinr = denominator > 0.0 ? signal / denominator : std::numeric_limits<double>::infinity();
    out.success = out.sinr >= threshold;
    return out;
}

// ---------------------------------------------------------------------------
// Radius selection

namespace detail {

/// x with P(X > x) <= tail for unit-mean Gamma(m, 1/m) power.
inline double fading_quantile(int m, double tail) {
    double lo = 0.0, hi = 1.0;
    while (regularized_upper_gamma(m, m * hi) > tail) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (regularized_upper_gamma(m, m * mid) > tail ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace detail

/// Disk radius beyond which the truncated network is indistinguishable from
/// the infinite plane at Monte Carlo resolution: fewer than `tail` LOS mmWave
/// BSs are expected outside it, and no BS outside it can close a noise-limited
/// link at the 1 - tail fading quantile. Never smaller than cfg.radius.
inline double suggested_sim_radius(const NetworkConfig& cfg, double max_rate_threshold = -1.0,
                                   double tail = 1e-4) {
    double R = cfg.radius;
    double Q = max_rate_threshold;
    if (Q <= 0.0) {
        Q = cfg.sinr_threshold(1);
        for (std::size_t i = 2; i <= cfg.file_rates.size(); ++i) Q = std::min(Q, cfg.sinr_threshold(i));
    }
    if (cfg.lambda_mm > 0.0) {
        // Expected LOS count beyond R: 2 pi lambda exp(-beta R) (R / beta + 1 / beta^2).
        if (cfg.blockage > 0.0) {
            const double b = cfg.blockage;
            auto outside = [&](double r) {
                return 2.0 * std::numbers::pi * cfg.lambda_mm * std::exp(-b * r) * (r / b + 1.0 / (b * b));
            };
            double r = 1.0;
            while (outside(r) > tail) r *= 1.1;
            R = std::max(R, r);
        }
        const double x = detail::fading_quantile(cfg.fading_mm.nakagami_order, tail);
        const double reach = cfg.snr_mm() * cfg.serving_gain() * x / Q;
        R = std::max(R, std::pow(reach, 1.0 / cfg.alpha_nlos));
        if (cfg.blockage == 0.0) R = std::max(R, std::pow(reach, 1.0 / cfg.alpha_los));
    }
    if (cfg.lambda_mu > 0.0) {
        const double x = detail::fading_quantile(cfg.fading_mu.nakagami_order, tail);
        R = std::max(R, std::pow(cfg.snr_mu() * x / Q, 1.0 / cfg.alpha_mu));
        // Keep the chance of an empty muWave disk negligible.
        R = std::max(R, std::sqrt(-std::log(tail) / (std::numbers::pi * cfg.lambda_mu)));
    }
    return R;
}

// ---------------------------------------------------------------------------
// Estimators

namespace detail {

inline nlohmann::json realization_json(const PppRealization& net, const NetworkConfig& cfg) {
    const auto gains = effective_gain_distribution(cfg.pattern);
    nlohmann::json mm = nlohmann::json::array(), mu = nlohmann::json::array();
    for (const auto& bs : net.mm_bs)
        mm.push_back({{"x", bs.position.x},
                      {"y", bs.position.y},
                      {"los", bs.los},
                      {"fading", bs.fading},
                      {"gain", gains.entries[bs.gain_class].gain},
                      {"key", bs.cache_key}});
    for (const auto& bs : net.mu_bs)
        mu.push_back({{"x", bs.position.x}, {"y", bs.position.y}, {"fading", bs.fading}, {"key", bs.cache_key}});
    return {{"seed", net.seed}, {"radius", net.radius}, {"mm_bs", mm}, {"mu_bs", mu}};
}

inline const char* tier_name(Tier t) { return t == Tier::MmWave ? "mm" : "mu"; }

/// Runs body(trial, rng, line) for every trial on `workers` threads and
/// returns the number of trials for which it reported success.
template <class Body>
std::size_t run_trials(const SimOptions& opt, Body&& body) {
    detail::require(opt.trials >= 1, "at least one trial is required");
    const unsigned workers = std::max(1u, opt.workers);
    std::vector<std::string> lines(opt.dump ? opt.trials : 0);
    std::vector<std::size_t> hits(workers, 0);
    auto work = [&](unsigned w) {
        for (std::size_t t = w; t < opt.trials; t += workers) {
            std::mt19937_64 rng(trial_seed(opt.seed, t));
            if (body(t, rng, opt.dump ? &lines[t] : nullptr)) ++hits[w];
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    if (opt.dump)
        for (const auto& l : lines) *opt.dump << l << '\n';
    std::size_t total = 0;
    for (auto h : hits) total += h;
    return total;
}

}  // namespace detail

inline SimEstimate estimate_asp(const NetworkConfig& cfg, const CachingPolicy& policy,
                                const PopularityProfile& profile, const SimOptions& opt) {
    cfg.validate_for_catalog(profile.catalog_size());
    detail::require(policy.catalog_size() == profile.catalog_size(), "policy and popularity differ in catalog size");
    policy.validate(cfg);
    const double radius = opt.radius > 0.0 ? opt.radius : cfg.radius;
    const std::size_t hits = detail::run_trials(opt, [&](std::size_t t, std::mt19937_64& rng, std::string* line) {
        auto net = sample_realization(cfg, radius, rng);
        net.seed = trial_seed(opt.seed, t);
        const std::size_t file = profile.sample_request(rng);
        const auto r = evaluate_request(net, file, cfg, policy, opt.regime, opt.selection, opt.serving);
        if (line) {
            auto j = detail::realization_json(net, cfg);
            j["trial"] = t;
            j["request"] = file;
            j["tier"] = r.tier ? detail::tier_name(*r.tier) : nullptr;
            j["serving"] = r.serving ? nlohmann::json(*r.serving) : nlohmann::json(nullptr);
            j["sinr"] = std::isfinite(r.sinr) ? nlohmann::json(r.sinr) : nlohmann::json("inf");
            j["success"] = r.success;
            *line = j.dump();
        }
        return r.success;
    });
    return make_estimate(hits, opt.trials, opt.regime);
}

/// Frequency with which the typical user attaches to the muWave tier.
inline SimEstimate estimate_association(const NetworkConfig& cfg, const SimOptions& opt) {
    cfg.validate();
    const double radius = opt.radius > 0.0 ? opt.radius : cfg.radius;
    const std::size_t hits = detail::run_trials(opt, [&](std::size_t t, std::mt19937_64& rng, std::string* line) {
        auto net = sample_realization(cfg, radius, rng);
        net.seed = trial_seed(opt.seed, t);
        const auto tier = associate(net, cfg);
        if (line) {
            auto j = detail::realization_json(net, cfg);
            j["trial"] = t;
            j["tier"] = tier ? detail::tier_name(*tier) : nullptr;
            *line = j.dump();
        }
        return tier == Tier::MuWave;
    });
    return make_estimate(hits, opt.trials, Regime::Simulated);
}

}  // namespace mmcache
