#pragma once

// Content catalog with Zipf request popularity. Files are 1-based in the
// public interface and unit-sized.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "mmcache/error.hpp"

namespace mmcache {

class PopularityProfile {
public:
    std::size_t catalog_size() const noexcept { return probabilities_.size(); }
    double zipf_exponent() const noexcept { return exponent_; }
    const std::vector<double>& probabilities() const noexcept { return probabilities_; }

    /// Request probability of file i, 1-based.
    double probability(std::size_t file) const { return probabilities_.at(file - 1); }

    /// Draws a 1-based file index by inverse CDF over the cumulative popularity.
    template <class Rng>
    std::size_t sample_request(Rng& rng) const {
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        const auto index = static_cast<std::size_t>(it - cumulative_.begin());
        return std::min(index, probabilities_.size() - 1) + 1;
    }

    friend PopularityProfile zipf_popularity(std::size_t catalog_size, double exponent);

private:
    double exponent_ = 0.0;
    std::vector<double> probabilities_;
    std::vector<double> cumulative_;
};

inline PopularityProfile zipf_popularity(std::size_t catalog_size, double exponent) {
    detail::require(catalog_size >= 1, "catalog size must be at least 1");
    detail::require(std::isfinite(exponent) && exponent >= 0.0, "zipf exponent must be finite and nonnegative");

    PopularityProfile profile;
    profile.exponent_ = exponent;
    profile.probabilities_.resize(catalog_size);
    // Summing the smallest weights first keeps the normalizer accurate for long tails.
    double norm = 0.0;
    for (std::size_t j = catalog_size; j >= 1; --j) {
        const double w = std::pow(static_cast<double>(j), -exponent);
        profile.probabilities_[j - 1] = w;
        norm += w;
    }
    for (auto& f : profile.probabilities_) f /= norm;

    profile.cumulative_.resize(catalog_size);
    double running = 0.0;
    for (std::size_t i = 0; i < catalog_size; ++i) {
        running += profile.probabilities_[i];
        profile.cumulative_[i] = running;
    }
    profile.cumulative_.back() = 1.0;
    return profile;
}

template <class Rng>
std::size_t sample_request(const PopularityProfile& profile, Rng& rng) {
    return profile.sample_request(rng);
}

}  // namespace mmcache
