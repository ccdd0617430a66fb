#pragma once

// Experiment runner behind the command-line tool: INI configuration, sweeps
// over one parameter, and CSV result rows.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "mmcache/asp.hpp"
#include "mmcache/association.hpp"
#include "mmcache/error.hpp"
#include "mmcache/network.hpp"
#include "mmcache/optimizer.hpp"
#include "mmcache/policy.hpp"
#include "mmcache/popularity.hpp"
#include "mmcache/simulator.hpp"

namespace mmcache {

inline constexpr const char* kVersion = "0.3.1";

/// Malformed or inconsistent configuration file.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class SweepAxis { None, Zipf, Blockage, LambdaMm, LambdaMu, Rate };
enum class Strategy { Proposed, MC, UC, RC };

inline const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::None: return "none";
        case SweepAxis::Zipf: return "zipf";
        case SweepAxis::Blockage: return "blockage";
        case SweepAxis::LambdaMm: return "lambda_mm";
        case SweepAxis::LambdaMu: return "lambda_mu";
        case SweepAxis::Rate: return "rate";
    }
    return "?";
}

inline const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::Proposed: return "PROPOSED";
        case Strategy::MC: return "MC";
        case Strategy::UC: return "UC";
        case Strategy::RC: return "RC";
    }
    return "?";
}

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::NoiseLimited: return "nl";
        case Regime::InterferenceLimited: return "il";
        case Regime::General: return "general";
        case Regime::Simulated: return "simulated";
    }
    return "?";
}

inline const char* to_string(ServingDistanceModel::Mode m) {
    switch (m) {
        case ServingDistanceModel::Mode::Fixed: return "fixed";
        case ServingDistanceModel::Mode::MeanNearestNeighbor: return "mean_nn";
        case ServingDistanceModel::Mode::UniformReference: return "uniform_reference";
    }
    return "?";
}

struct ExperimentConfig {
    NetworkConfig network = table1_config();
    std::size_t catalog = 10;
    double zipf = 0.8;
    Regime regime = Regime::NoiseLimited;
    ServingDistanceModel serving_distance;
    SweepAxis sweep = SweepAxis::None;
    std::vector<double> grid;
    std::vector<Strategy> strategies{Strategy::Proposed, Strategy::MC, Strategy::UC, Strategy::RC};
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    /// Simulation disk radius; 0 picks suggested_sim_radius per sweep point.
    double sim_radius = 0.0;
    std::string output;

    /// Sweep values, or a single placeholder point when nothing is swept.
    std::vector<double> points() const {
        if (sweep == SweepAxis::None) return {std::nan("")};
        return grid;
    }

    /// Network and popularity at one sweep value.
    std::pair<NetworkConfig, PopularityProfile> at(double value) const {
        NetworkConfig cfg = network;
        double exponent = zipf;
        switch (sweep) {
            case SweepAxis::None: break;
            case SweepAxis::Zipf: exponent = value; break;
            case SweepAxis::Blockage: cfg.blockage = value; break;
            case SweepAxis::LambdaMm: cfg.lambda_mm = value; break;
            case SweepAxis::LambdaMu: cfg.lambda_mu = value; break;
            case SweepAxis::Rate: cfg.rate = value; break;
        }
        return {cfg, zipf_popularity(catalog, exponent)};
    }

    /// Rejects infeasible settings at every sweep point before anything runs.
    void validate() const {
        auto need = [](bool ok, const std::string& msg) {
            if (!ok) throw ConfigError(msg);
        };
        need(catalog >= 1, "popularity.catalog: must be at least 1");
        need(regime != Regime::Simulated, "experiment.regime: must be nl, il or general");
        need(!strategies.empty(), "experiment.strategies: at least one strategy is required");
        need(sim_radius >= 0.0, "experiment.sim_radius: must be nonnegative");
        need(std::isfinite(zipf), "popularity.zipf: must be finite");
        if (serving_distance.mode == ServingDistanceModel::Mode::Fixed)
            need(serving_distance.fixed_mm > 0.0 && serving_distance.fixed_mu > 0.0,
                 "experiment.serving_distance_mm/mu: fixed serving distances must be positive");
        if (sweep == SweepAxis::None) {
            need(grid.empty(), "experiment.grid: given without a sweep axis");
        } else {
            need(!grid.empty(), "experiment.grid: a sweep axis needs a grid");
            need(std::all_of(grid.begin(), grid.end(), [](double v) { return std::isfinite(v); }),
                 "experiment.grid: values must be finite");
            need(std::adjacent_find(grid.begin(), grid.end(), std::greater_equal<>()) == grid.end(),
                 "experiment.grid: values must be strictly increasing");
        }
        for (double v : points()) {
            try {
                const auto [cfg, profile] = at(v);
                cfg.validate_for_catalog(catalog);
            } catch (const std::invalid_argument& e) {
                std::string where = sweep == SweepAxis::None ? "" : " at " + std::string(to_string(sweep)) + "=" +
                                                                        std::to_string(v);
                throw ConfigError("infeasible configuration" + where + ": " + e.what());
            }
        }
    }

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// ---------------------------------------------------------------------------
// INI parsing

namespace detail {

inline std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& field, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || trim(text.substr(used)) != "") throw ConfigError(field + ": not a number: '" + text + "'");
    return v;
}

inline long long parse_integer(const std::string& field, const std::string& text) {
    const double v = parse_double(field, text);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) throw ConfigError(field + ": not an integer: '" + text + "'");
    return static_cast<long long>(v);
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace detail

/// Parses the INI text. Keys ending in `_db` are converted to linear before
/// assignment, so `snr_mm_db = 54` and `snr_mm = 251188.6` are equivalent.
inline ExperimentConfig parse_experiment_config(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
    }

    ExperimentConfig ec;
    auto& net = ec.network;
    // SNRs are applied after powers so that either order in the file works.
    std::optional<double> snr_mm, snr_mu;

    using Setter = std::function<void(const std::string& field, const std::string& value)>;
    auto real = [](double& target) -> Setter {
        return [&target](const std::string& f, const std::string& v) { target = detail::parse_double(f, v); };
    };
    auto optional_real = [](std::optional<double>& target) -> Setter {
        return [&target](const std::string& f, const std::string& v) { target = detail::parse_double(f, v); };
    };
    auto integer = [](int& target) -> Setter {
        return [&target](const std::string& f, const std::string& v) {
            target = static_cast<int>(detail::parse_integer(f, v));
        };
    };

    const std::map<std::string, std::map<std::string, Setter>> keys{
        {"network",
         {{"lambda_mm", real(net.lambda_mm)},
          {"lambda_mu", real(net.lambda_mu)},
          {"blockage", real(net.blockage)},
          {"alpha_los", real(net.alpha_los)},
          {"alpha_nlos", real(net.alpha_nlos)},
          {"alpha_mu", real(net.alpha_mu)},
          {"power_mm", real(net.power_mm)},
          {"power_mu", real(net.power_mu)},
          {"noise_mm", real(net.noise_mm)},
          {"noise_mu", real(net.noise_mu)},
          {"snr_mm", optional_real(snr_mm)},
          {"snr_mu", optional_real(snr_mu)},
          {"bias_mm", optional_real(net.bias_mm)},
          {"bias_mu", optional_real(net.bias_mu)},
          {"radius", real(net.radius)},
          {"beamwidth", real(net.pattern.beamwidth)},
          {"mainlobe_gain", real(net.pattern.mainlobe_gain)},
          {"sidelobe_gain", real(net.pattern.sidelobe_gain)},
          {"nakagami_mm", integer(net.fading_mm.nakagami_order)},
          {"nakagami_mu", integer(net.fading_mu.nakagami_order)},
          {"cache_mm", integer(net.cache_mm)},
          {"cache_mu", integer(net.cache_mu)},
          {"load", real(net.load)},
          {"rate", real(net.rate)},
          {"file_rates",
           [&net](const std::string& f, const std::string& v) {
               net.file_rates.clear();
               for (const auto& item : detail::split_list(v)) net.file_rates.push_back(detail::parse_double(f, item));
           }}}},
        {"popularity",
         {{"catalog",
           [&ec](const std::string& f, const std::string& v) {
               const auto n = detail::parse_integer(f, v);
               if (n < 1) throw ConfigError(f + ": must be at least 1");
               ec.catalog = static_cast<std::size_t>(n);
           }},
          {"zipf", real(ec.zipf)}}},
        {"experiment",
         {{"regime",
           [&ec](const std::string& f, const std::string& v) {
               const auto s = detail::lower(v);
               if (s == "nl") ec.regime = Regime::NoiseLimited;
               else if (s == "il") ec.regime = Regime::InterferenceLimited;
               else if (s == "general") ec.regime = Regime::General;
               else throw ConfigError(f + ": expected nl, il or general, got '" + v + "'");
           }},
          {"serving_distance",
           [&ec](const std::string& f, const std::string& v) {
               const auto s = detail::lower(v);
               if (s == "mean_nn") ec.serving_distance.mode = ServingDistanceModel::Mode::MeanNearestNeighbor;
               else if (s == "uniform_reference") ec.serving_distance.mode = ServingDistanceModel::Mode::UniformReference;
               else if (s == "fixed") ec.serving_distance.mode = ServingDistanceModel::Mode::Fixed;
               else throw ConfigError(f + ": expected mean_nn, uniform_reference or fixed, got '" + v + "'");
           }},
          {"serving_distance_mm", real(ec.serving_distance.fixed_mm)},
          {"serving_distance_mu", real(ec.serving_distance.fixed_mu)},
          {"sweep",
           [&ec](const std::string& f, const std::string& v) {
               const auto s = detail::lower(v);
               for (auto a : {SweepAxis::None, SweepAxis::Zipf, SweepAxis::Blockage, SweepAxis::LambdaMm,
                              SweepAxis::LambdaMu, SweepAxis::Rate})
                   if (s == to_string(a)) {
                       ec.sweep = a;
                       return;
                   }
               throw ConfigError(f + ": unknown sweep axis '" + v + "'");
           }},
          {"grid",
           [&ec](const std::string& f, const std::string& v) {
               ec.grid.clear();
               for (const auto& item : detail::split_list(v)) ec.grid.push_back(detail::parse_double(f, item));
           }},
          {"strategies",
           [&ec](const std::string& f, const std::string& v) {
               ec.strategies.clear();
               for (const auto& item : detail::split_list(v)) {
                   const auto s = detail::lower(item);
                   if (s == "proposed") ec.strategies.push_back(Strategy::Proposed);
                   else if (s == "mc") ec.strategies.push_back(Strategy::MC);
                   else if (s == "uc") ec.strategies.push_back(Strategy::UC);
                   else if (s == "rc") ec.strategies.push_back(Strategy::RC);
                   else throw ConfigError(f + ": unknown strategy '" + item + "'");
               }
           }},
          {"trials",
           [&ec](const std::string& f, const std::string& v) {
               const auto n = detail::parse_integer(f, v);
               if (n < 0) throw ConfigError(f + ": must be nonnegative");
               ec.trials = static_cast<std::size_t>(n);
           }},
          {"seed",
           [&ec](const std::string& f, const std::string& v) {
               try {
                   std::size_t used = 0;
                   ec.seed = std::stoull(detail::trim(v), &used);
                   if (used != detail::trim(v).size()) throw std::invalid_argument("trailing");
               } catch (const std::exception&) {
                   throw ConfigError(f + ": not an unsigned integer: '" + v + "'");
               }
           }},
          {"sim_radius", real(ec.sim_radius)},
          {"output", [&ec](const std::string&, const std::string& v) { ec.output = v; }}}}};

    for (const auto& [section, body] : tree) {
        const auto known = keys.find(section);
        if (!body.data().empty() || known == keys.end())
            throw ConfigError("unknown section or top-level key '" + section + "'");
        for (const auto& [raw_key, node] : body) {
            const std::string field = section + "." + raw_key;
            std::string key = raw_key;
            std::string value = detail::trim(node.data());
            const bool db = key.size() > 3 && key.ends_with("_db");
            if (db) key.resize(key.size() - 3);
            const auto setter = known->second.find(key);
            if (setter == known->second.end()) throw ConfigError(field + ": unknown key");
            if (db) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.17g", db_to_linear(detail::parse_double(field, value)));
                value = buf;
            }
            setter->second(field, value);
        }
    }
    if (snr_mm) net.noise_mm = net.power_mm / *snr_mm;
    if (snr_mu) net.noise_mu = net.power_mu / *snr_mu;
    ec.validate();
    return ec;
}

inline ExperimentConfig parse_experiment_config(const std::string& text) {
    std::istringstream in(text);
    return parse_experiment_config(in);
}

namespace detail {

inline std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Fully expanded, linear-unit configuration that parses back to `ec`.
inline std::string effective_config(const ExperimentConfig& ec) {
    using detail::g17;
    const auto& n = ec.network;
    std::ostringstream os;
    os << "[network]\n"
       << "lambda_mm = " << g17(n.lambda_mm) << "\n"
       << "lambda_mu = " << g17(n.lambda_mu) << "\n"
       << "blockage = " << g17(n.blockage) << "\n"
       << "alpha_los = " << g17(n.alpha_los) << "\n"
       << "alpha_nlos = " << g17(n.alpha_nlos) << "\n"
       << "alpha_mu = " << g17(n.alpha_mu) << "\n"
       << "power_mm = " << g17(n.power_mm) << "\n"
       << "power_mu = " << g17(n.power_mu) << "\n"
       << "noise_mm = " << g17(n.noise_mm) << "\n"
       << "noise_mu = " << g17(n.noise_mu) << "\n";
    if (n.bias_mm) os << "bias_mm = " << g17(*n.bias_mm) << "\n";
    if (n.bias_mu) os << "bias_mu = " << g17(*n.bias_mu) << "\n";
    os << "radius = " << g17(n.radius) << "\n"
       << "beamwidth = " << g17(n.pattern.beamwidth) << "\n"
       << "mainlobe_gain = " << g17(n.pattern.mainlobe_gain) << "\n"
       << "sidelobe_gain = " << g17(n.pattern.sidelobe_gain) << "\n"
       << "nakagami_mm = " << n.fading_mm.nakagami_order << "\n"
       << "nakagami_mu = " << n.fading_mu.nakagami_order << "\n"
       << "cache_mm = " << n.cache_mm << "\n"
       << "cache_mu = " << n.cache_mu << "\n"
       << "load = " << g17(n.load) << "\n"
       << "rate = " << g17(n.rate) << "\n";
    if (!n.file_rates.empty()) {
        os << "file_rates = ";
        for (std::size_t i = 0; i < n.file_rates.size(); ++i) os << (i ? ", " : "") << g17(n.file_rates[i]);
        os << "\n";
    }
    os << "\n[popularity]\n"
       << "catalog = " << ec.catalog << "\n"
       << "zipf = " << g17(ec.zipf) << "\n"
       << "\n[experiment]\n"
       << "regime = " << to_string(ec.regime) << "\n"
       << "serving_distance = " << to_string(ec.serving_distance.mode) << "\n"
       << "serving_distance_mm = " << g17(ec.serving_distance.fixed_mm) << "\n"
       << "serving_distance_mu = " << g17(ec.serving_distance.fixed_mu) << "\n"
       << "sweep = " << to_string(ec.sweep) << "\n";
    if (!ec.grid.empty()) {
        os << "grid = ";
        for (std::size_t i = 0; i < ec.grid.size(); ++i) os << (i ? ", " : "") << g17(ec.grid[i]);
        os << "\n";
    }
    os << "strategies = ";
    for (std::size_t i = 0; i < ec.strategies.size(); ++i) os << (i ? ", " : "") << to_string(ec.strategies[i]);
    os << "\ntrials = " << ec.trials << "\n"
       << "seed = " << ec.seed << "\n"
       << "sim_radius = " << g17(ec.sim_radius) << "\n";
    if (!ec.output.empty()) os << "output = " << ec.output << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Results

struct ResultRow {
    double sweep_value = std::nan("");
    std::string strategy;
    std::optional<double> analytic_asp;
    std::optional<double> sim_asp_mean;
    std::optional<double> ci_halfwidth;
    double association_p_mu = 0.0;
    std::optional<int> optimizer_iterations;
    double wall_time = 0.0;
};

inline constexpr const char* kCsvHeader =
    "sweep_value,strategy,analytic_asp,sim_asp_mean,ci_halfwidth,association_p_mu,optimizer_iterations,wall_time";

inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    auto num = [](std::optional<double> v) -> std::string {
        if (!v || std::isnan(*v)) return "";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10g", *v);
        return buf;
    };
    os << kCsvHeader << '\n';
    for (const auto& r : rows)
        os << num(r.sweep_value) << ',' << r.strategy << ',' << num(r.analytic_asp) << ',' << num(r.sim_asp_mean)
           << ',' << num(r.ci_halfwidth) << ',' << num(r.association_p_mu) << ','
           << (r.optimizer_iterations ? std::to_string(*r.optimizer_iterations) : "") << ',' << num(r.wall_time)
           << '\n';
}

// ---------------------------------------------------------------------------
// Runners

enum class Command { Associate, AspAnalytic, AspSim, OptimizeNl, OptimizeIl, Compare, Validate };

struct RunOptions {
    unsigned workers = 1;
    bool timing = false;
    std::ostream* log = nullptr;
    /// Tolerances of the validate command.
    double nl_tolerance = 0.03;
    double bound_sigmas = 3.0;
};

struct RunSummary {
    std::vector<ResultRow> rows;
    /// Cross-checks that failed (validate only).
    std::vector<std::string> failures;
};

namespace detail {

struct PlacedPolicy {
    CachingPolicy policy;
    std::optional<int> iterations;
};

inline PlacedPolicy place(Strategy s, Regime regime, const NetworkConfig& cfg, const PopularityProfile& profile,
                          const ServingDistanceModel& sdm, std::uint64_t seed) {
    const std::size_t L = profile.catalog_size();
    switch (s) {
        case Strategy::Proposed: {
            const auto r = regime == Regime::InterferenceLimited ? optimize_il(cfg, profile, sdm)
                                                                 : optimize_nl(cfg, profile);
            return {r.policy, r.iterations};
        }
        case Strategy::MC: return {{baseline_mc(profile, cfg.cache_mm), baseline_mc(profile, cfg.cache_mu)}, {}};
        case Strategy::UC: return {{baseline_uc(L, cfg.cache_mm), baseline_uc(L, cfg.cache_mu)}, {}};
        case Strategy::RC: {
            std::mt19937_64 rng(seed);
            auto mm = baseline_rc(L, cfg.cache_mm, rng);
            auto mu = baseline_rc(L, cfg.cache_mu, rng);
            return {{std::move(mm), std::move(mu)}, {}};
        }
    }
    throw std::logic_error("unknown strategy");
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline RunSummary run_experiment(Command cmd, const ExperimentConfig& ec, const RunOptions& ro = {}) {
    ec.validate();
    RunSummary out;
    const auto pts = ec.points();
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const auto [cfg, profile] = ec.at(pts[k]);
        const auto assoc = association_probability(cfg);
        // One seed per sweep point, shared by all strategies: common random numbers.
        const std::uint64_t point_seed = trial_seed(ec.seed, k);

        if (cmd == Command::Associate) {
            const auto t0 = std::chrono::steady_clock::now();
            ResultRow row;
            row.sweep_value = pts[k];
            row.strategy = "-";
            row.association_p_mu = assoc.p_mu;
            if (ro.timing) row.wall_time = detail::seconds_since(t0);
            out.rows.push_back(row);
            continue;
        }

        std::vector<Strategy> strategies = ec.strategies;
        Regime regime = ec.regime;
        if (cmd == Command::OptimizeNl || cmd == Command::OptimizeIl) {
            strategies = {Strategy::Proposed};
            regime = cmd == Command::OptimizeNl ? Regime::NoiseLimited : Regime::InterferenceLimited;
        }
        const bool analytic = cmd != Command::AspSim;
        const bool simulate = (cmd == Command::AspSim || cmd == Command::Compare || cmd == Command::Validate) &&
                              ec.trials > 0;

        for (Strategy s : strategies) {
            const auto t0 = std::chrono::steady_clock::now();
            ResultRow row;
            row.sweep_value = pts[k];
            row.strategy = to_string(s);
            row.association_p_mu = assoc.p_mu;
            const auto placed =
                detail::place(s, regime, cfg, profile, ec.serving_distance, splitmix64(point_seed ^ 0x5ca1ab1eULL));
            row.optimizer_iterations = placed.iterations;
            if (analytic) row.analytic_asp = analytic_asp(regime, cfg, placed.policy, profile, ec.serving_distance).total;
            if (simulate) {
                SimOptions so;
                so.regime = regime;
                so.trials = ec.trials;
                so.seed = point_seed;
                so.workers = ro.workers;
                so.radius = ec.sim_radius > 0.0 ? ec.sim_radius : suggested_sim_radius(cfg);
                const auto est = estimate_asp(cfg, placed.policy, profile, so);
                row.sim_asp_mean = est.mean;
                row.ci_halfwidth = est.ci_halfwidth;
            }
            if (ro.timing) row.wall_time = detail::seconds_since(t0);

            if (cmd == Command::Validate && row.analytic_asp && row.sim_asp_mean) {
                const double a = *row.analytic_asp, m = *row.sim_asp_mean, ci = *row.ci_halfwidth;
                std::string where = row.strategy;
                if (ec.sweep != SweepAxis::None) where += " at " + std::string(to_string(ec.sweep)) + "=" + detail::g17(pts[k]);
                if (regime == Regime::NoiseLimited && std::abs(a - m) > ro.nl_tolerance)
                    out.failures.push_back(where + ": analytic " + detail::g17(a) + " vs simulated " + detail::g17(m));
                if (regime != Regime::NoiseLimited && a < m - ro.bound_sigmas * ci)
                    out.failures.push_back(where + ": bound " + detail::g17(a) + " below simulated " + detail::g17(m) +
                                           " - " + detail::g17(ro.bound_sigmas) + " CI");
            }
            if (ro.log)
                *ro.log << "point " << k << " strategy " << row.strategy << " done\n";
            out.rows.push_back(std::move(row));
        }
    }
    return out;
}

}  // namespace mmcache
