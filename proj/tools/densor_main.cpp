// SPDX-License-Identifier: Apache-2.0
//
// densor: distortion-bound sweeps for dense Gaussian sensor networks.
// Reads a scenario file, runs the analytic bounds (and optional Monte Carlo
// validation), and writes sweep.csv, report.txt and scenario.resolved.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "densor/errors.hpp"
#include "densor/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"distortion bounds for dense Gaussian sensor networks"};
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool validate_only = false;

    app.add_option("--config", config_path, "scenario file")->required();
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--set", overrides, "override, repeatable: block.key=value");
    app.add_option("--seed", seed, "master seed; sets gains.seed and mc.seed")
        ->each([&](const std::string&) { seed_given = true; });
    app.add_flag("--validate", validate_only, "schema-check the scenario and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        densor::ScenarioLoad load = densor::load_scenario_file(config_path);
        for (const std::string& ov : overrides) {
            densor::apply_override(load.scenario, ov);
        }
        if (seed_given) {
            load.scenario.gains.seed = seed;
            load.scenario.mc.seed = seed;
        }
        // overrides may have fixed earlier violations; re-check from scratch
        if (!overrides.empty() || seed_given) {
            densor::ScenarioLoad recheck;
            recheck.scenario = load.scenario;
            recheck.diagnostics = densor::validate_scenario(load.scenario);
            // keep parse-level diagnostics (unknown keys etc.)
            for (const auto& d : load.diagnostics) {
                if (d.find("must") == std::string::npos && d.find("missing") == std::string::npos) {
                    recheck.diagnostics.push_back(d);
                }
            }
            load = std::move(recheck);
        }

        if (validate_only) {
            if (load.diagnostics.empty()) {
                std::cout << "ok: " << config_path << "\n";
                return kExitOk;
            }
            for (const auto& d : load.diagnostics) std::cout << d << "\n";
            return kExitConfig;
        }
        if (!load.diagnostics.empty()) {
            for (const auto& d : load.diagnostics) std::cerr << d << "\n";
            return kExitConfig;
        }

        const densor::RunArtifacts artifacts = densor::run_scenario(load.scenario, out_dir);
        std::cout << "wrote " << artifacts.csv.string() << "\n"
                  << "wrote " << artifacts.report.string() << "\n"
                  << "wrote " << artifacts.resolved.string() << "\n";
        return kExitOk;
    } catch (const densor::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
