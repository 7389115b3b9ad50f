// Batch front end: `run` executes a JSON experiment config and writes CSV,
// `report` pretty-prints a CSV produced by `run`.

#include "verivote/config.hpp"
#include "verivote/csv.hpp"
#include "verivote/runner.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"mechanisms for binary collective decisions with costly verification"};
    app.require_subcommand(1);

    std::string config_path, out_path, csv_path;
    std::optional<std::uint64_t> seed;
    std::optional<long long> samples;

    CLI::App* run = app.add_subcommand("run", "execute an experiment config");
    run->add_option("config", config_path, "JSON config file")->required();
    run->add_option("--out", out_path, "output CSV path (overrides the config)");
    run->add_option("--seed", seed, "Monte Carlo seed (overrides the config)");
    run->add_option("--samples", samples, "Monte Carlo sample count (overrides the config)");

    CLI::App* report = app.add_subcommand("report", "render a results CSV as a table");
    report->add_option("csv", csv_path, "CSV file produced by run")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            verivote::ExperimentConfig cfg = verivote::load_config(config_path);
            if (seed) cfg.seed = *seed;
            if (samples) {
                if (*samples < 1) throw verivote::ConfigError("--samples must be positive");
                cfg.samples = *samples;
            }
            if (cfg.samples && !cfg.seed)
                throw verivote::ConfigError("config.seed (or --seed) is required when sampling");
            if (!out_path.empty()) cfg.out = out_path;
            if (cfg.out.empty()) throw verivote::ConfigError("config.out (or --out) is required");

            verivote::RunResult result = verivote::run_task(cfg);
            result.csv.write(cfg.out);
            std::cout << result.summary << "\n";
            return 0;
        }
        // report
        verivote::ParsedCsv csv = verivote::read_csv(csv_path);
        std::cout << verivote::render_table(csv);
        return 0;
    } catch (const verivote::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        // report's malformed-CSV failures are usage errors
        return report->parsed() ? 2 : 1;
    }
}
