#pragma once

// Physical-layer primitives: path loss, two-state blockage, sectorized
// antenna gains and Nakagami power fading. All gains are linear power factors.

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "mmcache/error.hpp"

namespace mmcache {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

struct AntennaPattern {
    double beamwidth = std::numbers::pi / 6.0;  // radians
    double mainlobe_gain = 15.0;
    double sidelobe_gain = 0.0316227766016838;

    void validate() const {
        detail::require(beamwidth > 0.0 && beamwidth < 2.0 * std::numbers::pi,
                        "beamwidth must lie in (0, 2*pi)");
        detail::require(sidelobe_gain > 0.0 && mainlobe_gain > sidelobe_gain,
                        "antenna gains must satisfy mainlobe > sidelobe > 0");
    }

    /// Gain of a perfectly aligned link (main lobe at both ends).
    double aligned_gain() const { return mainlobe_gain * mainlobe_gain; }

    friend bool operator==(const AntennaPattern&, const AntennaPattern&) = default;
};

/// Effective transmit-receive gain seen from a randomly oriented interferer.
struct GainDistribution {
    struct Entry {
        double gain;
        double probability;
    };
    /// Order: MM, Mm, mM, mm.
    std::array<Entry, 4> entries{};

    double mean_gain() const {
        double g = 0.0;
        for (const auto& e : entries) g += e.gain * e.probability;
        return g;
    }

    /// The three distinct gain levels with Mm and mM merged.
    std::array<Entry, 3> merged() const {
        return {{entries[0],
                 {entries[1].gain, entries[1].probability + entries[2].probability},
                 entries[3]}};
    }
};

inline GainDistribution effective_gain_distribution(const AntennaPattern& pattern) {
    pattern.validate();
    const double two_pi = 2.0 * std::numbers::pi;
    const double main = pattern.beamwidth / two_pi;
    const double side = (two_pi - pattern.beamwidth) / two_pi;
    const double gm = pattern.mainlobe_gain;
    const double gs = pattern.sidelobe_gain;
    GainDistribution d;
    d.entries = {{{gm * gm, main * main}, {gm * gs, main * side}, {gs * gm, side * main}, {gs * gs, side * side}}};
    return d;
}

struct FadingModel {
    int nakagami_order = 1;

    void validate() const { detail::require(nakagami_order >= 1, "Nakagami order must be >= 1"); }

    /// Unit-mean Gamma(m, 1/m) channel power.
    template <class Rng>
    double sample(Rng& rng) const {
        std::gamma_distribution<double> gamma(nakagami_order, 1.0 / nakagami_order);
        return gamma(rng);
    }

    friend bool operator==(const FadingModel&, const FadingModel&) = default;
};

template <class Rng>
double nakagami_power_sample(const FadingModel& model, Rng& rng) {
    model.validate();
    return model.sample(rng);
}

inline double los_probability(double distance, double blockage_density) {
    detail::require(distance >= 0.0 && blockage_density >= 0.0,
                    "distance and blockage density must be nonnegative");
    return std::exp(-blockage_density * distance);
}

inline double nlos_probability(double distance, double blockage_density) {
    detail::require(distance >= 0.0 && blockage_density >= 0.0,
                    "distance and blockage density must be nonnegative");
    return -std::expm1(-blockage_density * distance);
}

inline double path_loss(double distance, double exponent) {
    detail::require(exponent > 0.0, "path-loss exponent must be positive");
    detail::require(distance > 0.0, "path loss is singular at zero distance");
    return std::pow(distance, -exponent);
}

}  // namespace mmcache
