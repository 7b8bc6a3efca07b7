// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "densor/bounds.hpp"

namespace densor {

/// A sweep scenario: block-structured plain-text config with the blocks
/// process, power, gains, sweep, mc, numerics. See the README for the
/// schema; unknown keys and blocks are rejected.
struct Scenario {
    struct Process {
        std::string kind = "gauss-markov"; // gauss-markov | tabulated
        double sigma2 = 1.0;
        double eta = 1.0;
        double t0 = 1.0;
        std::string kernel_csv; // tabulated only
    };
    struct Power {
        std::string family = "constant"; // constant | linear | power-law | near-exponential
        double p_tot = 1.0;
        double p_ind = 1.0;
        double omega = 0.25;
        double c = 0.2;
        double epsilon = 0.5;
    };
    struct Gains {
        std::string mode = "constant"; // constant | random
        double h_lower = 1.0;
        double h_upper = 1.0;
        std::uint64_t seed = 1;
    };
    struct Mc {
        bool enabled = false;
        std::size_t trials = 100000;
        std::optional<double> sigma_d2; // empty = auto (derived from the row's theta')
        std::uint64_t seed = 1;
        int max_n = 200;
        int quad_per_gap = 20;
    };
    struct Numerics {
        double kappa = 0.99;
        std::size_t k_max = 100000;
        int quad_panels = 8;
        int exact_max_n = 4000;
    };

    Process process;
    Power power;
    Gains gains;
    std::vector<long long> sweep_n;
    Mc mc;
    Numerics numerics;

    bool has_process = false;
    bool has_power = false;
    bool has_gains = false;
    bool has_sweep = false;
};

struct ScenarioLoad {
    Scenario scenario;
    std::vector<std::string> diagnostics; ///< empty when well-formed
};

/// Parses and schema-checks without computing anything; every violation is
/// listed with its location.
ScenarioLoad load_scenario(std::istream& in, const std::string& name = "<stream>");
ScenarioLoad load_scenario_file(const std::string& path);

/// Applies one `block.key=value` override; throws ConfigError on unknown
/// keys or malformed values.
void apply_override(Scenario& scenario, const std::string& assignment);

/// Range/consistency diagnostics on a parsed scenario.
std::vector<std::string> validate_scenario(const Scenario& scenario);

/// Canonical fully-resolved serialization; reloading it reproduces the run.
std::string serialize_scenario(const Scenario& scenario);

struct RunArtifacts {
    std::filesystem::path csv;
    std::filesystem::path report;
    std::filesystem::path resolved;
    std::vector<BoundRow> rows;
};

/// Runs the sweep and writes sweep.csv, report.txt and scenario.resolved
/// under out_dir. Throws ConfigError for scenario problems and numeric
/// exceptions from the modules otherwise; no truncated CSV is ever left
/// behind (rows are computed in full before writing).
RunArtifacts run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

} // namespace densor
