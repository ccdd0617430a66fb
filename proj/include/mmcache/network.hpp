#pragma once

// Physical and topological parameters of the hybrid mmWave / muWave network.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "mmcache/channel.hpp"
#include "mmcache/error.hpp"

namespace mmcache {

/// Which network a quantity refers to.
enum class Tier { MmWave, MuWave };

/// How the Table-style "15 dB" main-lobe entry is read.
enum class GainReading { Linear, Decibel };

struct NetworkConfig {
    double lambda_mm = 5e-5;  // BS density, nodes / m^2
    double lambda_mu = 1e-6;
    double blockage = 0.008;  // 1 / m
    double alpha_los = 2.0;
    double alpha_nlos = 4.0;
    double alpha_mu = 3.5;
    double power_mm = 1.0;  // linear
    double power_mu = 1.0;
    double noise_mm = 3.981071705534972e-06;  // P_m / noise = 54 dB
    double noise_mu = 3.981071705534973e-11;  // P_mu / noise = 104 dB
    std::optional<double> bias_mm;            // defaults to 1 / power_mm
    std::optional<double> bias_mu;            // defaults to 1 / power_mu
    double radius = 500.0;                    // m
    AntennaPattern pattern{};
    FadingModel fading_mm{10};
    FadingModel fading_mu{1};
    int cache_mm = 5;
    int cache_mu = 6;
    double load = 1.0;   // N, equal for every serving BS
    double rate = 0.8;   // rho = N * nu, bits/s/Hz
    std::vector<double> file_rates;  // optional per-file override of rate

    static constexpr double kMaxRate = 1.0;
    static constexpr int kMaxNakagamiOrder = 64;

    double effective_bias_mm() const { return bias_mm.value_or(1.0 / power_mm); }
    double effective_bias_mu() const { return bias_mu.value_or(1.0 / power_mu); }

    double snr_mm() const { return power_mm / noise_mm; }
    double snr_mu() const { return power_mu / noise_mu; }

    /// Gain of the serving mmWave link, G^M G^M.
    double serving_gain() const { return pattern.aligned_gain(); }

    double rate_of(std::size_t file) const {
        if (file_rates.empty()) return rate;
        return file_rates.at(file - 1);
    }

    /// SINR threshold 2^rho - 1 for a 1-based file index.
    double sinr_threshold(std::size_t file) const { return std::exp2(rate_of(file)) - 1.0; }

    double density(Tier tier) const { return tier == Tier::MmWave ? lambda_mm : lambda_mu; }

    void validate() const {
        using detail::require;
        require(lambda_mm >= 0.0 && lambda_mu >= 0.0 && std::isfinite(lambda_mm) && std::isfinite(lambda_mu),
                "BS densities must be finite and nonnegative");
        require(blockage >= 0.0 && std::isfinite(blockage), "blockage density must be finite and nonnegative");
        require(alpha_nlos > 2.0 && alpha_mu > 2.0, "NLOS and muWave path-loss exponents must exceed 2");
        require(alpha_los > 2.0 || (alpha_los > 0.0 && blockage > 0.0),
                "LOS path-loss exponent must exceed 2 unless blockage is positive");
        require(power_mm > 0.0 && power_mu > 0.0, "transmit powers must be positive");
        require(noise_mm > 0.0 && noise_mu > 0.0, "noise powers must be positive");
        require(effective_bias_mm() > 0.0 && effective_bias_mu() > 0.0, "bias factors must be positive");
        require(radius > 0.0, "region radius must be positive");
        pattern.validate();
        fading_mm.validate();
        fading_mu.validate();
        require(fading_mm.nakagami_order <= kMaxNakagamiOrder && fading_mu.nakagami_order <= kMaxNakagamiOrder,
                "Nakagami order is capped at 64");
        require(cache_mm >= 0 && cache_mu >= 0, "cache sizes must be nonnegative");
        require(load > 0.0, "load must be positive");
        auto rate_ok = [](double r) { return r > 0.0 && r <= kMaxRate; };
        require(rate_ok(rate), "target rate must lie in (0, 1] bits/s/Hz");
        for (double r : file_rates) require(rate_ok(r), "per-file target rates must lie in (0, 1] bits/s/Hz");
    }

    /// Checks the catalog-dependent invariants (cache sizes, per-file rates).
    void validate_for_catalog(std::size_t catalog_size) const {
        validate();
        detail::require(static_cast<std::size_t>(cache_mm) <= catalog_size &&
                            static_cast<std::size_t>(cache_mu) <= catalog_size,
                        "cache sizes must not exceed the catalog size");
        detail::require(file_rates.empty() || file_rates.size() == catalog_size,
                        "per-file rate vector must match the catalog size");
    }

    friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Baseline parameter set (54 dB / 104 dB SNR, pi/6 beams, 5e-5 / 1e-6 densities).
inline NetworkConfig table1_config(GainReading reading = GainReading::Linear) {
    NetworkConfig cfg;
    cfg.pattern.mainlobe_gain = reading == GainReading::Linear ? 15.0 : db_to_linear(15.0);
    cfg.pattern.sidelobe_gain = db_to_linear(-15.0);
    cfg.noise_mm = cfg.power_mm / db_to_linear(54.0);
    cfg.noise_mu = cfg.power_mu / db_to_linear(104.0);
    return cfg;
}

/// Interference-limited variant: denser muWave tier, lighter blockage, low rate.
inline NetworkConfig il_config(GainReading reading = GainReading::Linear) {
    NetworkConfig cfg = table1_config(reading);
    cfg.lambda_mu = 1e-5;
    cfg.blockage = 0.005;
    cfg.rate = 0.08;
    return cfg;
}

}  // namespace mmcache
