// mmcache: caching experiments for hybrid mmWave / muWave networks.
//
//   mmcache compare --config configs/table1.ini --out results.csv
//
// Exit status: 0 success, 1 usage or configuration error, 2 numerical failure.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "mmcache/experiment.hpp"

namespace {

int run(int argc, char** argv) {
    using namespace mmcache;

    CLI::App app{"Probabilistic caching in hybrid mmWave / muWave networks"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1, 1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
    std::string out_path;
    bool dump_config = false;
    bool timing = false;
    app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "master seed (overrides the config)");
    app.add_option("--workers", workers, "simulation threads")->check(CLI::Range(1u, 1024u));
    app.add_option("--out", out_path, "CSV output path (default: config output, else stdout)");
    app.add_flag("--dump-effective-config", dump_config, "print the normalized configuration and exit");
    app.add_flag("--timing", timing, "fill the wall_time column (makes output nondeterministic)");

    const std::map<std::string, std::pair<Command, const char*>> commands{
        {"associate", {Command::Associate, "association probabilities"}},
        {"asp-analytic", {Command::AspAnalytic, "analytic ASP per strategy"}},
        {"asp-sim", {Command::AspSim, "simulated ASP per strategy"}},
        {"optimize-nl", {Command::OptimizeNl, "noise-limited optimizer"}},
        {"optimize-il", {Command::OptimizeIl, "interference-limited optimizer"}},
        {"compare", {Command::Compare, "all strategies, analytic and simulated"}},
        {"validate", {Command::Validate, "analytic vs simulated cross-check"}},
    };
    for (const auto& [name, c] : commands) app.add_subcommand(name, c.second)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    ExperimentConfig ec;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open " + config_path);
            ec = parse_experiment_config(in);
        }
        if (seed) ec.seed = *seed;
        ec.validate();
    } catch (const std::invalid_argument& e) {
        std::cerr << "mmcache: " << (config_path.empty() ? "" : config_path + ": ") << e.what() << '\n';
        return 1;
    }

    if (dump_config) {
        std::cout << effective_config(ec);
        return 0;
    }

    const std::string cmd_name = app.get_subcommands().front()->get_name();
    std::cerr << "mmcache " << kVersion << " " << cmd_name << " seed=" << ec.seed << " workers=" << workers << '\n';
    std::istringstream echo(effective_config(ec));
    for (std::string line; std::getline(echo, line);)
        if (!line.empty()) std::cerr << "  " << line << '\n';

    RunOptions ro;
    ro.workers = workers;
    ro.timing = timing;
    RunSummary summary;
    try {
        summary = run_experiment(commands.at(cmd_name).first, ec, ro);
    } catch (const NumericalError& e) {
        std::cerr << "mmcache: numerical failure: " << e.what() << " (estimate " << e.estimate() << ", error "
                  << e.error_bound() << ")\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "mmcache: " << e.what() << '\n';
        return 1;
    }

    const std::string path = !out_path.empty() ? out_path : ec.output;
    if (path.empty() || path == "-") {
        write_csv(std::cout, summary.rows);
    } else {
        std::ofstream os(path);
        if (!os) {
            std::cerr << "mmcache: cannot write " << path << '\n';
            return 1;
        }
        write_csv(os, summary.rows);
    }
    for (const auto& f : summary.failures) std::cerr << "mmcache: check failed: " << f << '\n';
    return summary.failures.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "mmcache: " << e.what() << '\n';
        return 2;
    }
}
