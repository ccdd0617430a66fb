#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "mmcache/error.hpp"
#include "mmcache/network.hpp"

namespace mmcache {

/// Per-file caching probabilities for both tiers.
struct CachingPolicy {
    std::vector<double> mm;
    std::vector<double> mu;

    static constexpr double kBudgetSlack = 1e-9;

    std::size_t catalog_size() const noexcept { return mm.size(); }

    const std::vector<double>& of(Tier tier) const { return tier == Tier::MmWave ? mm : mu; }
    std::vector<double>& of(Tier tier) { return tier == Tier::MmWave ? mm : mu; }

    double probability(Tier tier, std::size_t file) const { return of(tier).at(file - 1); }

    void validate(double budget_mm, double budget_mu) const {
        detail::require(mm.size() == mu.size() && !mm.empty(), "policy vectors must be nonempty and of equal length");
        for (const auto* v : {&mm, &mu})
            for (double p : *v) detail::require(p >= 0.0 && p <= 1.0, "caching probabilities must lie in [0, 1]");
        detail::require(std::accumulate(mm.begin(), mm.end(), 0.0) <= budget_mm + kBudgetSlack,
                        "mmWave caching probabilities exceed the cache size");
        detail::require(std::accumulate(mu.begin(), mu.end(), 0.0) <= budget_mu + kBudgetSlack,
                        "muWave caching probabilities exceed the cache size");
    }

    void validate(const NetworkConfig& cfg) const { validate(cfg.cache_mm, cfg.cache_mu); }

    friend bool operator==(const CachingPolicy&, const CachingPolicy&) = default;
};

}  // namespace mmcache
